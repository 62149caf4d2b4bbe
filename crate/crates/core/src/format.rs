//! The `hdt-instance v1` text format.
//!
//! ```text
//! # hdt-instance v1
//! norm=L2
//! delta=1
//! set A
//! 0 0
//! 1/2 3/4+1/2*r2
//! set B
//! 1 0
//! ```
//!
//! `#` starts a comment, `delta` is optional and coordinates use the exact
//! scalar encoding.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::geometry::{Norm, Point, PointSet};
use crate::scalar::{format_rational, parse_rational, ExactScalar, Rational};

pub const HEADER: &str = "# hdt-instance v1";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub a: PointSet,
    pub b: PointSet,
    pub norm: Norm,
    pub delta: Option<Rational>,
}

impl Instance {
    pub fn new(a: PointSet, b: PointSet, norm: Norm, delta: Option<Rational>) -> Self {
        Instance { a, b, norm, delta }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{HEADER}").unwrap();
        writeln!(out, "norm={}", self.norm).unwrap();
        if let Some(delta) = &self.delta {
            writeln!(out, "delta={}", format_rational(delta)).unwrap();
        }
        for (name, set) in [("A", &self.a), ("B", &self.b)] {
            writeln!(out, "set {name}").unwrap();
            for p in set.iter() {
                writeln!(out, "{} {}", p.x, p.y).unwrap();
            }
        }
        out
    }

    pub fn parse(text: &str) -> Result<Instance> {
        let mut norm = Norm::L2;
        let mut delta = None;
        let mut a: Option<Vec<Point>> = None;
        let mut b: Option<Vec<Point>> = None;
        let mut current: Option<char> = None;

        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| Error::Parse(format!("line {}: {msg}", lineno + 1));
            if let Some(value) = line.strip_prefix("norm=") {
                norm = value.parse().map_err(|e: Error| err(e.to_string()))?;
            } else if let Some(value) = line.strip_prefix("delta=") {
                delta = Some(parse_rational(value).map_err(|e| err(e.to_string()))?);
            } else if let Some(name) = line.strip_prefix("set ") {
                match name.trim() {
                    "A" => {
                        if a.replace(Vec::new()).is_some() {
                            return Err(err("duplicate set A".into()));
                        }
                        current = Some('A');
                    }
                    "B" => {
                        if b.replace(Vec::new()).is_some() {
                            return Err(err("duplicate set B".into()));
                        }
                        current = Some('B');
                    }
                    other => return Err(err(format!("unknown set `{other}`"))),
                }
            } else {
                let mut fields = line.split_whitespace();
                let (Some(x), Some(y), None) = (fields.next(), fields.next(), fields.next()) else {
                    return Err(err(format!("expected two coordinates, got `{line}`")));
                };
                let x: ExactScalar = x.parse().map_err(|e: Error| err(e.to_string()))?;
                let y: ExactScalar = y.parse().map_err(|e: Error| err(e.to_string()))?;
                let target = match current {
                    Some('A') => a.as_mut(),
                    Some('B') => b.as_mut(),
                    _ => None,
                }
                .ok_or_else(|| err("coordinates before any `set` line".into()))?;
                target.push(Point { x, y });
            }
        }

        let a = a.ok_or_else(|| Error::Parse("missing `set A`".into()))?;
        let b = b.ok_or_else(|| Error::Parse("missing `set B`".into()))?;
        Ok(Instance { a: PointSet::new("A", a), b: PointSet::new("B", b), norm, delta })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational;

    const SAMPLE: &str = "# hdt-instance v1
norm=L2
delta=1
set A
0 0
1/2 3/4+1/2*r2   # trailing comment
set B
-1 5/3
";

    #[test]
    fn parses_sample() {
        let inst = Instance::parse(SAMPLE).unwrap();
        assert_eq!(inst.norm, Norm::L2);
        assert_eq!(inst.delta, Some(rational(1, 1)));
        assert_eq!(inst.a.len(), 2);
        assert_eq!(inst.a.points[1].y, "3/4+1/2*r2".parse().unwrap());
        assert_eq!(inst.b.points[0], Point::new(-1, rational(5, 3)));
    }

    #[test]
    fn text_round_trip() {
        let inst = Instance::parse(SAMPLE).unwrap();
        assert_eq!(Instance::parse(&inst.to_text()).unwrap(), inst);
        let mut no_delta = inst.clone();
        no_delta.delta = None;
        no_delta.norm = Norm::Lp(3);
        assert_eq!(Instance::parse(&no_delta.to_text()).unwrap(), no_delta);
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(Instance::parse("set A\n0 0\n").is_err());
        assert!(Instance::parse("0 0\nset A\nset B\n").is_err());
        assert!(Instance::parse("set A\n0.5 0\nset B\n").is_err());
        assert!(Instance::parse("set A\n0 0 0\nset B\n").is_err());
        assert!(Instance::parse("norm=l9\nset A\nset B\n").is_err());
        assert!(Instance::parse("set A\nset A\nset B\n").is_err());
    }
}
