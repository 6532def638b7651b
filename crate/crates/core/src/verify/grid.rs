use std::fmt;

use serde::Serialize;

use super::{IdentityCase, VerifyError};

/// A grid coordinate: a number or a named variant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Value {
    Num(f64),
    Tag(&'static str),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Num(v) => write!(f, "{v}"),
            Value::Tag(t) => f.write_str(t),
        }
    }
}

#[derive(Debug, Clone)]
pub enum AxisValues {
    Fixed(Vec<Value>),
    /// Values depending on the coordinates fixed so far.
    Dependent(fn(&Point) -> Vec<f64>),
}

#[derive(Debug, Clone)]
pub struct Axis {
    pub name: &'static str,
    pub values: AxisValues,
}

impl Axis {
    pub fn nums(name: &'static str, values: &[f64]) -> Self {
        Axis { name, values: AxisValues::Fixed(values.iter().map(|&v| Value::Num(v)).collect()) }
    }

    pub fn tags(name: &'static str, values: &[&'static str]) -> Self {
        Axis { name, values: AxisValues::Fixed(values.iter().map(|&v| Value::Tag(v)).collect()) }
    }

    pub fn dependent(name: &'static str, f: fn(&Point) -> Vec<f64>) -> Self {
        Axis { name, values: AxisValues::Dependent(f) }
    }

    fn is_tag_axis(&self) -> bool {
        matches!(&self.values, AxisValues::Fixed(v) if v.iter().any(|x| matches!(x, Value::Tag(_))))
    }
}

/// Cartesian product of axes, expanded in axis order.
#[derive(Debug, Clone)]
pub struct Subgrid {
    pub axes: Vec<Axis>,
}

impl Subgrid {
    pub fn new(axes: Vec<Axis>) -> Self {
        Subgrid { axes }
    }

    fn has_axis(&self, name: &str) -> bool {
        self.axes.iter().any(|a| a.name == name)
    }
}

/// Named coordinates of one grid point.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Point(Vec<(&'static str, Value)>);

impl Point {
    pub fn new(entries: Vec<(&'static str, Value)>) -> Self {
        Point(entries)
    }

    pub fn get(&self, name: &str) -> Option<Value> {
        self.0.iter().find(|(n, _)| *n == name).map(|(_, v)| *v)
    }

    /// Numeric coordinate; panics if the registry entry lacks it.
    pub fn num(&self, name: &str) -> f64 {
        match self.get(name) {
            Some(Value::Num(v)) => v,
            other => panic!("grid point {self} has no numeric `{name}` ({other:?})"),
        }
    }

    /// Named-variant coordinate; panics if the registry entry lacks it.
    pub fn tag(&self, name: &str) -> &'static str {
        match self.get(name) {
            Some(Value::Tag(t)) => t,
            other => panic!("grid point {self} has no variant `{name}` ({other:?})"),
        }
    }

    pub fn entries(&self) -> &[(&'static str, Value)] {
        &self.0
    }

    fn pushed(&self, name: &'static str, v: Value) -> Point {
        let mut p = self.clone();
        p.0.push((name, v));
        p
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (n, v)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            write!(f, "{n}={v}")?;
        }
        Ok(())
    }
}

/// Replacement values for named axes, e.g. `lambda=0.5,1`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct GridOverride(pub Vec<(String, Vec<String>)>);

impl GridOverride {
    /// Parses `name=v1,v2,...` items; later items replace earlier ones.
    pub fn parse<S: AsRef<str>>(items: &[S]) -> Result<Self, VerifyError> {
        let mut out: Vec<(String, Vec<String>)> = Vec::new();
        for item in items {
            let item = item.as_ref();
            let (name, values) = item.split_once('=').ok_or_else(|| VerifyError::BadOverride(item.to_string()))?;
            let name = name.trim();
            if name.is_empty() {
                return Err(VerifyError::BadOverride(item.to_string()));
            }
            let values: Vec<String> =
                values.split(',').map(str::trim).filter(|v| !v.is_empty()).map(String::from).collect();
            out.retain(|(n, _)| n != name);
            out.push((name.to_string(), values));
        }
        Ok(GridOverride(out))
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

fn product(axes: &[Axis]) -> Vec<Point> {
    let mut points = vec![Point::default()];
    for axis in axes {
        let mut next = Vec::new();
        for p in &points {
            match &axis.values {
                AxisValues::Fixed(vs) => next.extend(vs.iter().map(|v| p.pushed(axis.name, *v))),
                AxisValues::Dependent(f) => next.extend(f(p).into_iter().map(|v| p.pushed(axis.name, Value::Num(v)))),
            }
        }
        points = next;
    }
    points
}

fn known_tag(axis: &Axis, v: &str) -> Option<&'static str> {
    let AxisValues::Fixed(known) = &axis.values else { return None };
    known.iter().find_map(|k| match k {
        Value::Tag(t) if *t == v => Some(*t),
        _ => None,
    })
}

/// Replacement axis; tags unknown to this subgrid are dropped here and
/// rejected later if no subgrid knows them.
fn override_axis(id: &str, axis: &Axis, raw: &[String]) -> Result<Axis, VerifyError> {
    let bad = |v: &str| VerifyError::BadValue { id: id.into(), axis: axis.name.into(), value: v.into() };
    let mut values = Vec::with_capacity(raw.len());
    for v in raw {
        if axis.is_tag_axis() {
            values.extend(known_tag(axis, v).map(Value::Tag));
        } else {
            let x: f64 = v.parse().map_err(|_| bad(v))?;
            if !x.is_finite() {
                return Err(bad(v));
            }
            values.push(Value::Num(x));
        }
    }
    Ok(Axis { name: axis.name, values: AxisValues::Fixed(values) })
}

pub(super) fn expand(case: &IdentityCase, grid: Option<&GridOverride>) -> Result<Vec<Point>, VerifyError> {
    let id = case.id.to_string();
    let ov = grid.filter(|g| !g.is_empty());
    let mut points = Vec::new();
    match ov {
        None => {
            for sub in &case.grid {
                points.extend(product(&sub.axes).into_iter().filter(|p| (case.domain)(p)));
            }
        }
        Some(ov) => {
            for (name, _) in &ov.0 {
                if !case.grid.iter().any(|s| s.has_axis(name)) {
                    return Err(VerifyError::UnknownAxis { id, axis: name.clone() });
                }
            }
            for (name, raw) in &ov.0 {
                let tag_axes: Vec<&Axis> =
                    case.grid.iter().flat_map(|s| &s.axes).filter(|a| a.name == name && a.is_tag_axis()).collect();
                if let Some(v) = raw.iter().find(|v| !tag_axes.is_empty() && tag_axes.iter().all(|a| known_tag(a, v).is_none())) {
                    return Err(VerifyError::BadValue { id, axis: name.clone(), value: v.clone() });
                }
            }
            for sub in case.grid.iter().filter(|s| ov.0.iter().all(|(n, _)| s.has_axis(n))) {
                let mut axes = Vec::with_capacity(sub.axes.len());
                for axis in &sub.axes {
                    match ov.0.iter().find(|(n, _)| n == axis.name) {
                        Some((_, raw)) => axes.push(override_axis(&id, axis, raw)?),
                        None => axes.push(axis.clone()),
                    }
                }
                points.extend(product(&axes).into_iter().filter(|p| (case.domain)(p)));
            }
            // every requested value must survive the domain restriction
            for (name, raw) in &ov.0 {
                for v in raw {
                    let seen = points.iter().any(|p| p.get(name).is_some_and(|x| value_matches(x, v)));
                    if !seen {
                        return Err(VerifyError::OutOfDomain { id, axis: name.clone(), value: v.clone() });
                    }
                }
            }
        }
    }
    if points.is_empty() {
        return Err(VerifyError::EmptyGrid { id });
    }
    Ok(points)
}

fn value_matches(v: Value, raw: &str) -> bool {
    match v {
        Value::Tag(t) => t == raw,
        Value::Num(x) => raw.parse::<f64>().is_ok_and(|r| r == x),
    }
}
