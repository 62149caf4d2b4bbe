//! Convolution 3SUM → L2 Hausdorff distance under translation with `|B| = 7`.
//!
//! A one-dimensional low-level gadget admits translations only near
//! `2iε + x_i·ε^{3/2}` along its axis. Three copies (unchanged, rotated by
//! π/2, and shrunk onto the diagonal) constrain `τ_x`, `τ_y` and `τ_x + τ_y`;
//! a four-point translation gadget confines `τ` to `[0, (2n−1)ε]²`.
//!
//! With `ρ = 1/(4Mn²)` and `ε = ρ⁴`, both `ε^{3/2} = ρ⁶` and the gadget
//! coordinates stay rational; only the diagonal copy of `B` needs `√2`.

use crate::error::{Error, Result};
use crate::geometry::{Norm, Point, PointSet};
use crate::reduction::{GadgetTag, LowLevelRole, ReductionOutput};
use crate::scalar::{int, ExactScalar, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Conv3SumInstance {
    pub x: Vec<i64>,
    pub m: i64,
}

impl Conv3SumInstance {
    /// Uses `M = max x_i`.
    pub fn new(x: Vec<i64>) -> Result<Self> {
        let m = x.iter().copied().max().unwrap_or(0);
        Conv3SumInstance::with_bound(x, m)
    }

    pub fn with_bound(x: Vec<i64>, m: i64) -> Result<Self> {
        if x.is_empty() {
            return Err(Error::InvalidInput("sequence must be nonempty".into()));
        }
        if let Some(bad) = x.iter().find(|&&v| v < 1 || v > m) {
            return Err(Error::InvalidInput(format!("value {bad} outside [1, {m}]")));
        }
        Ok(Conv3SumInstance { x, m })
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    /// Whitespace-separated integers; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let x = parse_ints(text.lines())?;
        Conv3SumInstance::new(x)
    }

    pub fn to_text(&self) -> String {
        self.x.iter().map(|v| format!("{v}\n")).collect()
    }
}

fn parse_ints<'a>(lines: impl Iterator<Item = &'a str>) -> Result<Vec<i64>> {
    lines
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .flat_map(str::split_whitespace)
        .map(|t| t.parse::<i64>().map_err(|e| Error::Parse(format!("`{t}`: {e}"))))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ThreeSumInstance {
    pub x: Vec<i64>,
    pub y: Vec<i64>,
    pub z: Vec<i64>,
}

impl ThreeSumInstance {
    pub fn new(x: Vec<i64>, y: Vec<i64>, z: Vec<i64>) -> Result<Self> {
        if x.len() != y.len() || y.len() != z.len() {
            return Err(Error::InvalidInput("X, Y and Z must have equal size".into()));
        }
        if x.iter().chain(&y).chain(&z).any(|&v| v < 1) {
            return Err(Error::InvalidInput("3SUM values must be positive".into()));
        }
        Ok(ThreeSumInstance { x, y, z })
    }

    /// Three blocks of integers separated by blank lines.
    pub fn parse(text: &str) -> Result<Self> {
        let mut blocks: Vec<Vec<&str>> = vec![Vec::new()];
        for line in text.lines() {
            let content = line.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                if !blocks.last().unwrap().is_empty() {
                    blocks.push(Vec::new());
                }
            } else {
                blocks.last_mut().unwrap().push(content);
            }
        }
        if blocks.last().is_some_and(Vec::is_empty) {
            blocks.pop();
        }
        if blocks.len() != 3 {
            return Err(Error::Parse(format!("expected 3 blocks of integers, found {}", blocks.len())));
        }
        let mut sets = blocks.into_iter().map(|b| parse_ints(b.into_iter()));
        ThreeSumInstance::new(sets.next().unwrap()?, sets.next().unwrap()?, sets.next().unwrap()?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction3SumParams {
    pub rho: Rational,
    pub eps: Rational,
    /// `ε^{3/2} = ρ⁶`.
    pub eps_1_5: Rational,
    pub delta: Rational,
    pub n: usize,
    pub offsets: [Point; 3],
}

impl Reduction3SumParams {
    pub fn new(inst: &Conv3SumInstance) -> Self {
        let n = inst.n() as i64;
        let rho = Rational::new(1.into(), (4 * inst.m * n * n).into());
        let eps = num_traits::pow(rho.clone(), 4);
        let eps_1_5 = num_traits::pow(rho.clone(), 6);
        let delta = int(1) + int(4 * n * n) * &eps * &eps;
        Reduction3SumParams {
            rho,
            eps,
            eps_1_5,
            delta,
            n: inst.n(),
            offsets: [Point::new(10, 0), Point::new(20, 0), Point::new(30, 0)],
        }
    }

    /// `4n²ε²`, the slack in every stripe constraint.
    pub fn slack(&self) -> Rational {
        &self.delta - int(1)
    }

    /// `2iε + x_i·ε^{3/2}`, the stripe position for index `i`.
    pub fn stripe(&self, i: usize, inst: &Conv3SumInstance) -> Rational {
        &self.eps * int(2 * i as i64) + &self.eps_1_5 * int(inst.x[i])
    }

    /// `(2n − 1)ε`, the side of the translation box.
    pub fn box_side(&self) -> Rational {
        &self.eps * int(2 * self.n as i64 - 1)
    }
}

/// Number points `p_i¹, p_i²`, filling points `q_i` (in that order per `i`)
/// and `B_l = {r₁, r₂}`, all on the x-axis.
pub fn low_level_gadget(
    inst: &Conv3SumInstance,
    params: &Reduction3SumParams,
) -> (PointSet, PointSet, Vec<LowLevelRole>, Vec<LowLevelRole>) {
    let eps = &params.eps;
    let mut a = Vec::with_capacity(3 * inst.n());
    let mut roles = Vec::with_capacity(3 * inst.n());
    for i in 0..inst.n() {
        let p1 = params.stripe(i, inst);
        let p2 = &p1 + eps;
        let q = eps * Rational::new((4 * i as i64 + 3).into(), 2.into());
        a.extend([Point::new(p1, 0), Point::new(p2, 0), Point::new(q, 0)]);
        roles.extend([LowLevelRole::Number1(i), LowLevelRole::Number2(i), LowLevelRole::Filling(i)]);
    }
    let b = vec![Point::new(-1, 0), Point::new(int(1) + eps, 0)];
    (PointSet::new("A_l", a), PointSet::new("B_l", b), roles, vec![LowLevelRole::R1, LowLevelRole::R2])
}

/// `(x, y) → (−y, x)`.
pub fn rotate90(set: &PointSet) -> PointSet {
    set.map(|p| Point { x: -&p.y, y: p.x.clone() })
}

/// Shrinks the gadget by `1/√2` and turns it onto the diagonal.
///
/// `A` maps `(x, 0) → (x/2, x/2)`. `B` is scaled about `r₁` so that its gap
/// becomes `2 + ε/√2` while `r₁` stays at distance 1 from the origin, then
/// rotated by π/4. Keeping `r₁` fixed is what makes the diagonal stripes sit at
/// `τ_x + τ_y = 2kε + x_k·ε^{3/2}`, matching the other two gadgets.
pub fn diagonal_transform(
    a_l: &PointSet,
    b_l: &PointSet,
    params: &Reduction3SumParams,
) -> Result<(PointSet, PointSet)> {
    if a_l.iter().chain(b_l.iter()).any(|p| !p.y.is_zero()) {
        return Err(Error::InvalidInput("diagonal transform expects points on the x-axis".into()));
    }
    let a = a_l.map(|p| {
        let h = p.x.half();
        Point { x: h.clone(), y: h }
    });
    let eps = ExactScalar::from_rational(params.eps.clone());
    let sqrt2 = ExactScalar::sqrt2();
    let half_sqrt2 = sqrt2.half();
    // s = (2 + ε/√2) / (2 + ε), with ε/√2 = ε·√2/2.
    let target_gap = ExactScalar::from_int(2) + &eps * &half_sqrt2;
    let s = target_gap.checked_div(&(ExactScalar::from_int(2) + eps))?;
    let one = ExactScalar::one();
    let b = b_l.map(|p| {
        let scaled = &(&s * &(&p.x + &one)) - &one;
        let c = &scaled * &half_sqrt2;
        Point { x: c.clone(), y: c }
    });
    Ok((a, b))
}

/// `A_t = {z_l, z_r, z_b, z_t}`, `B_t = {origin}`.
pub fn translation_gadget_3sum(params: &Reduction3SumParams) -> (PointSet, PointSet) {
    let near = params.box_side() - int(1);
    let a = vec![Point::new(near.clone(), 0), Point::new(1, 0), Point::new(0, near), Point::new(0, 1)];
    (PointSet::new("A_t", a), PointSet::new("B_t", vec![Point::origin()]))
}

pub fn reduce_conv3sum(inst: &Conv3SumInstance) -> Result<(ReductionOutput, Reduction3SumParams)> {
    reduce_conv3sum_with(inst, false)
}

/// Filling points at `(2n + k/2)ε` for `k = 0..=4n`, before the diagonal map.
///
/// Without them, any `τ` with `τ_x + τ_y` beyond the last stripe puts every
/// diagonal point inside `r₁`'s ball, and the directed instance `A → B`
/// becomes feasible whenever `n ≥ 2`.
pub fn diagonal_padding(params: &Reduction3SumParams) -> PointSet {
    let n = params.n as i64;
    let points = (0..=4 * n)
        .map(|k| Point::new(&params.eps * Rational::new((4 * n + k).into(), 2.into()), 0))
        .collect();
    PointSet::new("pad", points)
}

/// `extend_diagonal` adds [`diagonal_padding`] to the diagonal gadget, giving
/// `|A| = 13n + 5`.
pub fn reduce_conv3sum_with(
    inst: &Conv3SumInstance,
    extend_diagonal: bool,
) -> Result<(ReductionOutput, Reduction3SumParams)> {
    let params = Reduction3SumParams::new(inst);
    let (a_c, b_c, roles_a, roles_b) = low_level_gadget(inst, &params);
    let (a_r, b_r) = (rotate90(&a_c), rotate90(&b_c));
    let (a_d, b_d) = diagonal_transform(&a_c, &b_c, &params)?;
    let (a_t, b_t) = translation_gadget_3sum(&params);
    let [o_r, o_d, o_t] = &params.offsets;

    let mut a = Vec::with_capacity(9 * inst.n() + 4);
    let mut b = Vec::with_capacity(7);
    let mut tags_a = Vec::new();
    let mut tags_b = Vec::new();
    type Part<'a> = (&'a PointSet, &'a PointSet, Option<&'a Point>, fn(LowLevelRole) -> GadgetTag);
    let parts: [Part; 3] = [
        (&a_c, &b_c, None, GadgetTag::Column),
        (&a_r, &b_r, Some(o_r), GadgetTag::Row),
        (&a_d, &b_d, Some(o_d), GadgetTag::Diagonal),
    ];
    for (ga, gb, offset, tag) in parts {
        let place = |s: &PointSet| match offset {
            Some(o) => s.translate(o),
            None => s.clone(),
        };
        a.extend(place(ga).points);
        b.extend(place(gb).points);
        tags_a.extend(roles_a.iter().map(|&r| tag(r)));
        tags_b.extend(roles_b.iter().map(|&r| tag(r)));
    }
    if extend_diagonal {
        let pad = diagonal_padding(&params);
        let (pad_d, _) = diagonal_transform(&pad, &b_c, &params)?;
        tags_a.extend((0..pad_d.len()).map(|k| GadgetTag::Diagonal(LowLevelRole::Padding(k))));
        a.extend(pad_d.translate(o_d).points);
    }
    a.extend(a_t.translate(o_t).points);
    b.extend(b_t.translate(o_t).points);
    tags_a.extend([GadgetTag::TranslationAnchor; 4]);
    tags_b.push(GadgetTag::TranslationAnchor);

    let out = ReductionOutput {
        a: PointSet::new("A", a),
        b: PointSet::new("B", b),
        delta: params.delta.clone(),
        norm: Norm::L2,
        provenance_a: tags_a,
        provenance_b: tags_b,
        preprocessing_note: None,
    };
    Ok((out, params))
}

/// `τ = (2iε + x_i·ε^{3/2}, 2jε + x_j·ε^{3/2})` for a claimed solution `(i, j)`.
pub fn witness_translation(
    i: usize,
    j: usize,
    inst: &Conv3SumInstance,
    params: &Reduction3SumParams,
) -> Result<Point> {
    if i + j >= inst.n() {
        return Err(Error::InvalidInput(format!("indices ({i}, {j}) need i + j < n = {}", inst.n())));
    }
    Ok(Point::new(params.stripe(i, inst), params.stripe(j, inst)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{distance_key, undirected_hausdorff, directed_within};
    use crate::solver::{decide_at_translation, Direction};

    fn inst(x: &[i64]) -> Conv3SumInstance {
        Conv3SumInstance::new(x.to_vec()).unwrap()
    }

    #[test]
    fn params_are_exact() {
        let p = Reduction3SumParams::new(&inst(&[2]));
        assert_eq!(p.rho, Rational::new(1.into(), 8.into()));
        assert_eq!(&p.eps * &p.eps * &p.eps, &p.eps_1_5 * &p.eps_1_5);
        assert!(p.delta > int(1));
    }

    #[test]
    fn low_level_example() {
        let x = inst(&[2]);
        let p = Reduction3SumParams::new(&x);
        let rho = p.rho.clone();
        let r4 = num_traits::pow(rho.clone(), 4);
        let r6 = num_traits::pow(rho, 6);
        let (a, b, _, _) = low_level_gadget(&x, &p);
        assert_eq!(
            a.points,
            vec![
                Point::new(&r6 * int(2), 0),
                Point::new(&r4 + &r6 * int(2), 0),
                Point::new(&r4 * Rational::new(3.into(), 2.into()), 0)
            ]
        );
        assert_eq!(b.points, vec![Point::new(-1, 0), Point::new(int(1) + &r4, 0)]);
        assert_eq!(&b.points[1].x - &b.points[0].x, ExactScalar::from_rational(int(2) + r4));
    }

    #[test]
    fn rotation() {
        let s = PointSet::new("S", vec![Point::new(1, 0), Point::origin(), Point::new(3, -2)]);
        assert_eq!(rotate90(&s).points[0], Point::new(0, 1));
        assert_eq!(rotate90(&s).points[1], Point::origin());
        assert_eq!(rotate90(&rotate90(&rotate90(&rotate90(&s)))), s);
    }

    #[test]
    fn diagonal_gaps() {
        let x = inst(&[3, 1, 2]);
        let p = Reduction3SumParams::new(&x);
        let (a, b, _, _) = low_level_gadget(&x, &p);
        let (ad, bd) = diagonal_transform(&a, &b, &p).unwrap();
        let eps = ExactScalar::from_rational(p.eps.clone());
        // ε/√2 squared is ε²/2.
        let gap = distance_key(&ad.points[0], &ad.points[1], Norm::L2).magnitude;
        assert_eq!(gap, eps.square().half());
        let target = ExactScalar::from_int(2) + &eps * &ExactScalar::sqrt2().half();
        let gap_b = distance_key(&bd.points[0], &bd.points[1], Norm::L2).magnitude;
        assert_eq!(gap_b, target.square());
        // r₁ keeps unit distance from the origin.
        assert_eq!(bd.points[0].norm_squared(), ExactScalar::one());
        assert_eq!(ad.points[0], Point::new(a.points[0].x.half(), a.points[0].x.half()));
        let off_axis = PointSet::new("S", vec![Point::new(0, 1)]);
        assert!(diagonal_transform(&off_axis, &b, &p).is_err());
    }

    #[test]
    fn translation_gadget_behaviour() {
        let x = inst(&[1, 2, 3]);
        let p = Reduction3SumParams::new(&x);
        let (at, bt) = translation_gadget_3sum(&p);
        assert_eq!((at.len(), bt.len()), (4, 1));
        assert!(undirected_hausdorff(&at, &bt, Norm::L2).unwrap().within(&p.delta));
        let tau = Point::new(p.eps.clone(), -p.eps.clone());
        assert!(!directed_within(&at, &bt.translate(&tau), &p.delta, Norm::L2));
    }

    #[test]
    fn sizes_and_offsets() {
        let x = inst(&[1, 3, 2]);
        let (out, p) = reduce_conv3sum(&x).unwrap();
        assert_eq!((out.a.len(), out.b.len()), (31, 7));
        assert_eq!(out.provenance_a.len(), 31);
        // Gadgets are far enough apart that no point can be matched across them.
        let groups = [0..9, 9..18, 18..27, 27..31];
        let bgroups = [0..2, 2..4, 4..6, 6..7];
        let far = num_traits::pow(&p.delta * int(2) + int(3), 2);
        for (g, ra) in groups.iter().enumerate() {
            for (h, rb) in bgroups.iter().enumerate() {
                if g == h {
                    continue;
                }
                for pa in &out.a.points[ra.clone()] {
                    for pb in &out.b.points[rb.clone()] {
                        let d2 = distance_key(pa, pb, Norm::L2).magnitude;
                        assert!(d2 > ExactScalar::from_rational(far.clone()));
                    }
                }
            }
        }
    }

    #[test]
    fn witness_feasibility() {
        let pos = inst(&[5, 2, 4]);
        let (out, p) = reduce_conv3sum(&pos).unwrap();
        let tau = witness_translation(1, 1, &pos, &p).unwrap();
        assert!(decide_at_translation(&out.a, &out.b, &tau, &out.delta, Norm::L2, Direction::Undirected));
        assert!(witness_translation(2, 1, &pos, &p).is_err());

        let (padded, _) = reduce_conv3sum_with(&pos, true).unwrap();
        assert_eq!(padded.a.len(), 13 * 3 + 5);
        assert!(decide_at_translation(&padded.a, &padded.b, &tau, &padded.delta, Norm::L2, Direction::Undirected));

        let neg = inst(&[1, 1, 3]);
        let (out, p) = reduce_conv3sum(&neg).unwrap();
        let tau = witness_translation(1, 1, &neg, &p).unwrap();
        assert!(!decide_at_translation(&out.a, &out.b, &tau, &out.delta, Norm::L2, Direction::AToB));
    }

    #[test]
    fn files() {
        let c = Conv3SumInstance::parse("5\n2\n\n4\n").unwrap();
        assert_eq!((c.x.clone(), c.m), (vec![5, 2, 4], 5));
        assert_eq!(Conv3SumInstance::parse(&c.to_text()).unwrap(), c);
        assert!(Conv3SumInstance::parse("0\n").is_err());
        assert!(Conv3SumInstance::parse("x\n").is_err());
        let t = ThreeSumInstance::parse("2\n9\n\n5\n1\n\n3\n7\n").unwrap();
        assert_eq!(t.z, vec![3, 7]);
        assert!(ThreeSumInstance::parse("1\n\n2\n").is_err());
    }
}
