use super::{DensityPiece, Family, Measure, MeasureError};

fn fail<T>(literal: &str, reason: impl Into<String>) -> Result<T, MeasureError> {
    Err(MeasureError::Literal { literal: literal.to_string(), reason: reason.into() })
}

/// Parses one record such as `atom:loc=1,mass=2`, `powerexp:r=1,c=0`,
/// `m:r=0.5`, `shifted:c=1,k=2`, `ratsq`, `epkernel:p=1.5`,
/// `unit:a=0,b=1` or `zero`. Density records accept `w=` and `shift=`.
pub fn parse_measure_literal(literal: &str) -> Result<Measure, MeasureError> {
    let literal = literal.trim();
    let (kind, rest) = literal.split_once(':').unwrap_or((literal, ""));
    let mut fields: Vec<(&str, f64)> = Vec::new();
    for item in rest.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let Some((k, v)) = item.split_once('=') else {
            return fail(literal, format!("expected key=value, found `{item}`"));
        };
        let Ok(v) = v.trim().parse::<f64>() else {
            return fail(literal, format!("`{v}` is not a number"));
        };
        fields.push((k.trim(), v));
    }
    let allowed: &[&str] = match kind {
        "atom" => &["loc", "mass"],
        "powerexp" => &["r", "c", "w", "shift"],
        "m" => &["r", "w", "shift"],
        "shifted" => &["c", "k", "w"],
        "ratsq" => &["w", "shift"],
        "epkernel" => &["p", "w", "shift"],
        "unit" => &["a", "b", "w", "shift"],
        "zero" => &[],
        other => return fail(literal, format!("unknown measure kind `{other}`")),
    };
    if let Some((k, _)) = fields.iter().find(|(k, _)| !allowed.contains(k)) {
        return fail(literal, format!("unexpected key `{k}` for `{kind}`"));
    }
    let get = |k: &str| fields.iter().rev().find(|(key, _)| *key == k).map(|(_, v)| *v);
    let need = |k: &str| get(k).map_or_else(|| fail(literal, format!("missing `{k}`")), Ok);
    let w = get("w").unwrap_or(1.0);
    let shift = get("shift").unwrap_or(0.0);
    let piece = |family: Family| Measure::piece(DensityPiece { weight: w, shift, family });
    match kind {
        "atom" => Measure::atom(need("loc")?, get("mass").unwrap_or(1.0)),
        "powerexp" => piece(Family::PowerExp { r: need("r")?, c: get("c").unwrap_or(0.0) }),
        "m" => piece(Family::PowerExp { r: need("r")?, c: 0.0 }),
        "shifted" => Measure::shifted_power(need("c")?, need("k")?)?.scaled(w),
        "ratsq" => piece(Family::RationalSquare),
        "epkernel" => piece(Family::EpKernel { p: need("p")? }),
        "unit" => piece(Family::TruncatedUnit { a: need("a")?, b: need("b")? }),
        _ => Ok(Measure::zero()),
    }
}

/// Sum of several literal records.
pub fn parse_measure_literals<S: AsRef<str>>(literals: &[S]) -> Result<Measure, MeasureError> {
    literals
        .iter()
        .try_fold(Measure::zero(), |acc, l| Ok(acc.plus(&parse_measure_literal(l.as_ref())?)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_records() {
        let m = parse_measure_literals(&["atom:loc=1,mass=2", "powerexp:r=1,c=0", "unit:a=0,b=2,w=0.5"]).unwrap();
        assert_eq!(m.atoms().len(), 1);
        assert_eq!(m.pieces().len(), 2);
        assert_eq!(m.pieces()[1].weight, 0.5);
        let s = parse_measure_literal("shifted:c=1,k=2").unwrap();
        assert_eq!(s.pieces()[0].shift, 1.0);
        assert!(parse_measure_literal("zero").unwrap().is_zero());
        assert_eq!(parse_measure_literal("atom:loc=3").unwrap().atoms()[0].mass, 1.0);
    }

    #[test]
    fn rejects_bad_records() {
        for bad in ["blob:x=1", "atom:mass=1", "atom:loc=x", "atom:loc", "ratsq:q=1", "atom:loc=-1", "m:r=0"] {
            assert!(parse_measure_literal(bad).is_err(), "{bad}");
        }
    }
}
