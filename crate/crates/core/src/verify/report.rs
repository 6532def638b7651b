use std::io::Write;

use super::VerificationReport;

pub const CSV_HEADER: [&str; 5] = ["id", "params", "lhs", "rhs", "rel_err"];

fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// One row per grid point, floats with 17 significant digits.
pub fn write_csv<W: Write>(reports: &[VerificationReport], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in reports {
        for p in &r.points {
            w.write_record([
                r.id.clone(),
                p.params.clone(),
                fmt_float(p.lhs),
                fmt_float(p.rhs),
                fmt_float(p.rel_err),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// The reports as a pretty-printed JSON array.
pub fn write_json<W: Write>(reports: &[VerificationReport], mut out: W) -> std::io::Result<()> {
    serde_json::to_writer_pretty(&mut out, reports)?;
    out.write_all(b"\n")
}
