//! Points, norms and brute-force Hausdorff distances.
//!
//! Distances are never materialized as reals. A [`DistanceKey`] is a monotone
//! surrogate of the norm (the p-th power for `Lp`), so every comparison against
//! a rational threshold is exact.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::scalar::{ExactScalar, Rational};

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Point {
    pub x: ExactScalar,
    pub y: ExactScalar,
}

impl Point {
    pub fn new(x: impl Into<ExactScalar>, y: impl Into<ExactScalar>) -> Self {
        Point { x: x.into(), y: y.into() }
    }

    pub fn origin() -> Self {
        Point::default()
    }

    pub fn scale(&self, s: &ExactScalar) -> Point {
        Point { x: &self.x * s, y: &self.y * s }
    }

    pub fn dot(&self, other: &Point) -> ExactScalar {
        &self.x * &other.x + &self.y * &other.y
    }

    /// Squared Euclidean length.
    pub fn norm_squared(&self) -> ExactScalar {
        self.dot(self)
    }

    /// Counterclockwise rotation by a right angle: `(x, y) -> (-y, x)`.
    pub fn perp(&self) -> Point {
        Point { x: -&self.y, y: self.x.clone() }
    }

    pub fn midpoint(&self, other: &Point) -> Point {
        Point { x: (&self.x + &other.x).half(), y: (&self.y + &other.y).half() }
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.x.to_f64(), self.y.to_f64())
    }
}

impl<'a> Add<&'a Point> for &'a Point {
    type Output = Point;
    fn add(self, rhs: &Point) -> Point {
        Point { x: &self.x + &rhs.x, y: &self.y + &rhs.y }
    }
}

impl<'a> Sub<&'a Point> for &'a Point {
    type Output = Point;
    fn sub(self, rhs: &Point) -> Point {
        Point { x: &self.x - &rhs.x, y: &self.y - &rhs.y }
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, rhs: Point) -> Point {
        &self + &rhs
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, rhs: Point) -> Point {
        &self - &rhs
    }
}

impl Neg for &Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point { x: -&self.x, y: -&self.y }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A planar `Lp` norm. `Lp(1)` and `Lp(2)` are accepted and behave like `L1`
/// and `L2`; [`Norm::canonical`] folds them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Norm {
    L1,
    L2,
    Linf,
    Lp(u32),
}

impl Norm {
    pub fn lp(p: u32) -> Result<Norm> {
        match p {
            0 => Err(Error::InvalidInput("Lp norm requires p >= 1".into())),
            1 => Ok(Norm::L1),
            2 => Ok(Norm::L2),
            p => Ok(Norm::Lp(p)),
        }
    }

    pub fn canonical(self) -> Norm {
        match self {
            Norm::Lp(1) => Norm::L1,
            Norm::Lp(2) => Norm::L2,
            other => other,
        }
    }

    /// Exponent applied to both the coordinate gaps and the threshold, `None` for L∞.
    pub fn exponent(self) -> Option<u32> {
        match self.canonical() {
            Norm::L1 => Some(1),
            Norm::L2 => Some(2),
            Norm::Linf => None,
            Norm::Lp(p) => Some(p),
        }
    }

    /// Key of `|dx| + |dy|`-style magnitude for the coordinate gaps.
    fn magnitude(self, dx: &ExactScalar, dy: &ExactScalar) -> ExactScalar {
        match self.canonical() {
            Norm::L1 => dx.abs() + dy.abs(),
            Norm::Linf => dx.abs().max(dy.abs()),
            Norm::L2 => dx.square() + dy.square(),
            Norm::Lp(p) => dx.abs().pow(p) + dy.abs().pow(p),
        }
    }

    /// The threshold `δ` mapped into key space (`δ^p`, or `δ` itself for L1/L∞).
    pub fn threshold_key(self, delta: &Rational) -> ExactScalar {
        let d = ExactScalar::from_rational(delta.clone());
        match self.exponent() {
            None | Some(1) => d,
            Some(p) => d.pow(p),
        }
    }
}

impl fmt::Display for Norm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.canonical() {
            Norm::L1 => f.write_str("L1"),
            Norm::L2 => f.write_str("L2"),
            Norm::Linf => f.write_str("Linf"),
            Norm::Lp(p) => write!(f, "Lp:{p}"),
        }
    }
}

impl FromStr for Norm {
    type Err = Error;

    /// Accepts `l1`, `l2`, `linf` and `lp:<p>` in any case.
    fn from_str(s: &str) -> Result<Norm> {
        let lower = s.trim().to_ascii_lowercase();
        match lower.as_str() {
            "l1" => Ok(Norm::L1),
            "l2" => Ok(Norm::L2),
            "linf" | "l_inf" | "max" => Ok(Norm::Linf),
            other => {
                let p = other
                    .strip_prefix("lp:")
                    .or_else(|| other.strip_prefix("lp"))
                    .and_then(|p| p.parse::<u32>().ok())
                    .ok_or_else(|| Error::Parse(format!("unknown norm `{s}`")))?;
                Norm::lp(p)
            }
        }
    }
}

/// Exact, order-preserving surrogate of `‖p − q‖`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceKey {
    pub norm: Norm,
    pub magnitude: ExactScalar,
}

impl DistanceKey {
    pub fn zero(norm: Norm) -> Self {
        DistanceKey { norm, magnitude: ExactScalar::zero() }
    }

    /// Compares the represented distance with the threshold `δ`.
    pub fn compare_to_threshold(&self, delta: &Rational) -> Ordering {
        self.magnitude.cmp(&self.norm.threshold_key(delta))
    }

    pub fn within(&self, delta: &Rational) -> bool {
        self.compare_to_threshold(delta) != Ordering::Greater
    }

    /// Approximate real distance, for reporting.
    pub fn approx_distance(&self) -> f64 {
        let m = self.magnitude.to_f64();
        match self.norm.exponent() {
            None | Some(1) => m,
            Some(p) => m.powf(1.0 / p as f64),
        }
    }
}

impl PartialOrd for DistanceKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for DistanceKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.magnitude.cmp(&other.magnitude)
    }
}

pub fn distance_key(p: &Point, q: &Point, norm: Norm) -> DistanceKey {
    let dx = &p.x - &q.x;
    let dy = &p.y - &q.y;
    DistanceKey { norm, magnitude: norm.magnitude(&dx, &dy) }
}

/// True iff `‖p − q‖ ≤ δ` exactly.
pub fn within_distance(p: &Point, q: &Point, delta: &Rational, norm: Norm) -> bool {
    distance_key(p, q, norm).within(delta)
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PointSet {
    pub points: Vec<Point>,
    pub label: String,
}

impl PointSet {
    pub fn new(label: impl Into<String>, points: Vec<Point>) -> Self {
        PointSet { points, label: label.into() }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Point> {
        self.points.iter()
    }

    pub fn translate(&self, tau: &Point) -> PointSet {
        translate(self, tau)
    }

    /// Applies `f` to every point, keeping order and label.
    pub fn map(&self, f: impl Fn(&Point) -> Point) -> PointSet {
        PointSet { points: self.points.iter().map(f).collect(), label: self.label.clone() }
    }

    /// Concatenation, keeping `self`'s label.
    pub fn union(&self, other: &PointSet) -> PointSet {
        let mut points = self.points.clone();
        points.extend(other.points.iter().cloned());
        PointSet { points, label: self.label.clone() }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    fn require_nonempty(&self) -> Result<()> {
        if self.points.is_empty() {
            Err(Error::EmptyPointSet(self.label.clone()))
        } else {
            Ok(())
        }
    }
}

/// `S + τ`: every point shifted by `τ`, order preserved.
pub fn translate(set: &PointSet, tau: &Point) -> PointSet {
    set.map(|p| p + tau)
}

/// `max_{a∈A} min_{b∈B} ‖a − b‖` with the lowest-index witness pair `(a, b)`.
pub fn directed_hausdorff(
    a: &PointSet,
    b: &PointSet,
    norm: Norm,
) -> Result<(DistanceKey, (usize, usize))> {
    a.require_nonempty()?;
    b.require_nonempty()?;
    let mut best: Option<(DistanceKey, (usize, usize))> = None;
    for (i, p) in a.iter().enumerate() {
        let mut nearest: Option<(DistanceKey, usize)> = None;
        for (j, q) in b.iter().enumerate() {
            let key = distance_key(p, q, norm);
            if nearest.as_ref().is_none_or(|(k, _)| key < *k) {
                nearest = Some((key, j));
            }
        }
        let (key, j) = nearest.expect("nonempty");
        if best.as_ref().is_none_or(|(k, _)| key > *k) {
            best = Some((key, (i, j)));
        }
    }
    Ok(best.expect("nonempty"))
}

/// `max{δ⃗H(A, B), δ⃗H(B, A)}`.
pub fn undirected_hausdorff(a: &PointSet, b: &PointSet, norm: Norm) -> Result<DistanceKey> {
    let (ab, _) = directed_hausdorff(a, b, norm)?;
    let (ba, _) = directed_hausdorff(b, a, norm)?;
    Ok(ab.max(ba))
}

/// True iff every point of `a` has a point of `b` within `δ`, i.e. `δ⃗H(A, B) ≤ δ`.
pub fn directed_within(a: &PointSet, b: &PointSet, delta: &Rational, norm: Norm) -> bool {
    a.iter().all(|p| b.iter().any(|q| within_distance(p, q, delta, norm)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rational};
    use proptest::prelude::*;

    fn pt(x: i64, y: i64) -> Point {
        Point::new(x, y)
    }

    fn set(points: &[(i64, i64)]) -> PointSet {
        PointSet::new("S", points.iter().map(|&(x, y)| pt(x, y)).collect())
    }

    #[test]
    fn translation() {
        assert_eq!(set(&[(0, 0)]).translate(&pt(3, 4)), set(&[(3, 4)]));
        let s = set(&[(1, 1), (2, 2)]);
        assert_eq!(s.translate(&Point::origin()), s);
        assert_eq!(s.translate(&pt(-1, -1)), set(&[(0, 0), (1, 1)]));
    }

    #[test]
    fn keys_per_norm() {
        assert_eq!(distance_key(&pt(0, 0), &pt(3, 4), Norm::L2).magnitude, 25.into());
        assert_eq!(distance_key(&pt(1, 1), &pt(0, 0), Norm::L1).magnitude, 2.into());
        assert_eq!(distance_key(&pt(1, 1), &pt(0, 0), Norm::Linf).magnitude, 1.into());
        assert_eq!(distance_key(&pt(1, -2), &pt(0, 0), Norm::Lp(3)).magnitude, 9.into());
        assert!(distance_key(&pt(0, 0), &pt(3, 4), Norm::L2).within(&int(5)));
        assert!(!distance_key(&pt(0, 0), &pt(3, 4), Norm::L2).within(&rational(49, 10)));
    }

    #[test]
    fn directed_examples() {
        let (key, witness) =
            directed_hausdorff(&set(&[(0, 0), (2, 0)]), &set(&[(0, 0)]), Norm::L2).unwrap();
        assert_eq!(key.magnitude, 4.into());
        assert_eq!(witness, (1, 0));
        let (key, _) =
            directed_hausdorff(&set(&[(0, 0)]), &set(&[(0, 0), (2, 0)]), Norm::L2).unwrap();
        assert_eq!(key.magnitude, 0.into());
    }

    #[test]
    fn witness_ties_take_lowest_indices() {
        let (key, witness) =
            directed_hausdorff(&set(&[(0, 0), (0, 2)]), &set(&[(1, 1), (-1, 1)]), Norm::L1).unwrap();
        assert_eq!(key.magnitude, 2.into());
        assert_eq!(witness, (0, 0));
    }

    #[test]
    fn undirected_examples() {
        let a = set(&[(0, 0), (2, 0)]);
        let b = set(&[(0, 0)]);
        assert_eq!(undirected_hausdorff(&a, &b, Norm::L2).unwrap().magnitude, 4.into());
        assert_eq!(undirected_hausdorff(&b, &a, Norm::L2).unwrap().magnitude, 4.into());
        let key = undirected_hausdorff(&set(&[(0, 0)]), &set(&[(3, 4)]), Norm::L2).unwrap();
        assert_eq!(key.magnitude, 25.into());
    }

    #[test]
    fn empty_sets_are_rejected() {
        let empty = PointSet::new("E", vec![]);
        assert!(matches!(
            directed_hausdorff(&empty, &set(&[(0, 0)]), Norm::L1),
            Err(Error::EmptyPointSet(_))
        ));
        assert!(undirected_hausdorff(&set(&[(0, 0)]), &empty, Norm::L1).is_err());
    }

    #[test]
    fn norm_parsing() {
        assert_eq!("l1".parse::<Norm>().unwrap(), Norm::L1);
        assert_eq!("LINF".parse::<Norm>().unwrap(), Norm::Linf);
        assert_eq!("lp:3".parse::<Norm>().unwrap(), Norm::Lp(3));
        assert_eq!("lp:2".parse::<Norm>().unwrap(), Norm::L2);
        assert!("lp:0".parse::<Norm>().is_err());
        assert!("l7".parse::<Norm>().is_err());
    }

    fn small_point() -> impl Strategy<Value = Point> {
        ((-6i64..6, 1i64..3), (-6i64..6, 1i64..3))
            .prop_map(|((x, xd), (y, yd))| Point::new(rational(x, xd), rational(y, yd)))
    }

    fn small_set() -> impl Strategy<Value = PointSet> {
        prop::collection::vec(small_point(), 1..6).prop_map(|p| PointSet::new("S", p))
    }

    fn any_norm() -> impl Strategy<Value = Norm> {
        prop_oneof![Just(Norm::L1), Just(Norm::L2), Just(Norm::Linf), Just(Norm::Lp(3))]
    }

    proptest! {
        #[test]
        fn directed_is_bounded_by_undirected(a in small_set(), b in small_set(), norm in any_norm()) {
            let (d, _) = directed_hausdorff(&a, &b, norm).unwrap();
            prop_assert!(d <= undirected_hausdorff(&a, &b, norm).unwrap());
        }

        #[test]
        fn directed_equals_undirected_of_union(a in small_set(), b in small_set(), norm in any_norm()) {
            let (d, _) = directed_hausdorff(&a, &b, norm).unwrap();
            prop_assert_eq!(d, undirected_hausdorff(&a.union(&b), &b, norm).unwrap());
        }

        #[test]
        fn translation_invariance(a in small_set(), b in small_set(), t in small_point(), norm in any_norm()) {
            prop_assert_eq!(
                undirected_hausdorff(&a.translate(&t), &b.translate(&t), norm).unwrap(),
                undirected_hausdorff(&a, &b, norm).unwrap()
            );
        }

        #[test]
        fn zero_iff_contained(a in small_set(), b in small_set(), norm in any_norm()) {
            let (d, _) = directed_hausdorff(&a, &b, norm).unwrap();
            let contained = a.iter().all(|p| b.points.contains(p));
            prop_assert_eq!(d.magnitude.is_zero(), contained);
        }

        #[test]
        fn ball_containment_order(p in small_point(), q in small_point()) {
            let one = crate::scalar::int(1);
            let l1 = distance_key(&p, &q, Norm::L1);
            let linf = distance_key(&p, &q, Norm::Linf);
            prop_assert!(l1.magnitude >= linf.magnitude);
            let in_l1 = l1.within(&one);
            let in_l2 = distance_key(&p, &q, Norm::L2).within(&one);
            let in_linf = linf.within(&one);
            prop_assert!(!in_l1 || in_l2);
            prop_assert!(!in_l2 || in_linf);
        }
    }
}
