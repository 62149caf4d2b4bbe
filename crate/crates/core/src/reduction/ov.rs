//! Orthogonal Vectors → Hausdorff distance under translation.
//!
//! Vectors become columns of `d` points spaced `ε` apart. A 1-bit sits on the
//! gadget's baseline and a 0-bit is pushed right by a tiny `spacing`, so two
//! gadgets placed at horizontal distance 1 match within `δ = 1` exactly when
//! no coordinate has a 1 on both sides.
//!
//! The L∞ instance is the L1 instance mapped through `R(x, y) = (x − y, x + y)`,
//! which satisfies `‖R v‖∞ = ‖v‖₁`.

use std::fmt;

use crate::error::{Error, Result};
use crate::geometry::{Norm, Point, PointSet};
use crate::reduction::{GadgetTag, ReductionOutput};
use crate::scalar::{int, ExactScalar, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OVInstance {
    pub x: Vec<Vec<bool>>,
    pub y: Vec<Vec<bool>>,
}

impl OVInstance {
    pub fn new(x: Vec<Vec<bool>>, y: Vec<Vec<bool>>) -> Result<Self> {
        if x.is_empty() || y.is_empty() {
            return Err(Error::InvalidInput("both vector sets must be nonempty".into()));
        }
        let d = x[0].len();
        if d == 0 {
            return Err(Error::InvalidInput("dimension must be at least 1".into()));
        }
        if x.iter().chain(&y).any(|v| v.len() != d) {
            return Err(Error::InvalidInput("all vectors must have the same dimension".into()));
        }
        Ok(OVInstance { x, y })
    }

    pub fn from_strings(x: &[&str], y: &[&str]) -> Result<Self> {
        let conv = |rows: &[&str]| rows.iter().map(|r| parse_bits(r)).collect::<Result<Vec<_>>>();
        OVInstance::new(conv(x)?, conv(y)?)
    }

    pub fn m(&self) -> usize {
        self.x.len()
    }

    pub fn n(&self) -> usize {
        self.y.len()
    }

    pub fn d(&self) -> usize {
        self.x[0].len()
    }

    /// Lines of `0`/`1` strings; a blank line separates X from Y.
    pub fn parse(text: &str) -> Result<Self> {
        let mut blocks: Vec<Vec<Vec<bool>>> = vec![Vec::new()];
        for line in text.lines().map(|l| l.split('#').next().unwrap_or("").trim()) {
            if line.is_empty() {
                if !blocks.last().unwrap().is_empty() {
                    blocks.push(Vec::new());
                }
                continue;
            }
            blocks.last_mut().unwrap().push(parse_bits(line)?);
        }
        if blocks.last().is_some_and(Vec::is_empty) {
            blocks.pop();
        }
        match <[_; 2]>::try_from(blocks) {
            Ok([x, y]) => OVInstance::new(x, y),
            Err(b) => Err(Error::Parse(format!("expected 2 blocks of vectors, found {}", b.len()))),
        }
    }

    pub fn to_text(&self) -> String {
        let row = |v: &Vec<bool>| v.iter().map(|&b| if b { '1' } else { '0' }).collect::<String>();
        let mut out: Vec<String> = self.x.iter().map(row).collect();
        out.push(String::new());
        out.extend(self.y.iter().map(row));
        out.join("\n") + "\n"
    }
}

impl fmt::Display for OVInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

fn parse_bits(s: &str) -> Result<Vec<bool>> {
    s.trim()
        .chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(Error::Parse(format!("invalid bit `{c}` in `{s}`"))),
        })
        .collect()
}

/// Reduction constants for one instance size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OvParams {
    pub eps: Rational,
    pub spacing: Rational,
    pub delta: Rational,
    /// Norm of the emitted instance.
    pub norm: Norm,
    pub n: usize,
    pub d: usize,
}

impl OvParams {
    /// `ε = 1/(20mnd)` with spacing `ε²` for L1 and L∞; `ε = 1/(40pmnd)` with
    /// spacing `ε^{2p}` for `Lp`, including L2.
    pub fn new(m: usize, n: usize, d: usize, norm: Norm) -> Result<Self> {
        if m == 0 || n == 0 || d == 0 {
            return Err(Error::InvalidInput("m, n and d must be positive".into()));
        }
        let mnd = (m * n * d) as i64;
        let eps = match exponent(norm) {
            None => Rational::new(1.into(), (20 * mnd).into()),
            Some(p) => Rational::new(1.into(), (40 * p as i64 * mnd).into()),
        };
        OvParams::with_eps(n, d, norm, eps)
    }

    /// Same spacing rule with a caller-chosen `ε`.
    pub fn with_eps(n: usize, d: usize, norm: Norm, eps: Rational) -> Result<Self> {
        if eps <= int(0) {
            return Err(Error::InvalidInput("epsilon must be positive".into()));
        }
        let norm = norm.canonical();
        let spacing = match exponent(norm) {
            None => &eps * &eps,
            Some(p) => num_traits::pow(eps.clone(), 2 * p as usize),
        };
        Ok(OvParams { eps, spacing, delta: int(1), norm, n, d })
    }
}

/// `None` for the polygonal norms, `Some(p)` for `Lp` with `p ≥ 2`.
fn exponent(norm: Norm) -> Option<u32> {
    match norm.canonical() {
        Norm::L1 | Norm::Linf => None,
        Norm::L2 => Some(2),
        Norm::Lp(p) => Some(p),
    }
}

fn shift(set: &PointSet, dx: Rational, dy: Rational) -> PointSet {
    set.translate(&Point::new(dx, dy))
}

/// Point `i` (1-based) is `(spacing, iε)` for a 0-bit and `(0, iε)` for a 1-bit.
pub fn vector_gadget(v: &[bool], params: &OvParams) -> PointSet {
    let points = v
        .iter()
        .enumerate()
        .map(|(k, &bit)| {
            let x = if bit { int(0) } else { params.spacing.clone() };
            Point::new(x, &params.eps * int(k as i64 + 1))
        })
        .collect();
    PointSet::new("V", points)
}

pub fn mirrored_vector_gadget(v: &[bool], params: &OvParams) -> PointSet {
    let flipped: Vec<bool> = v.iter().map(|b| !b).collect();
    vector_gadget(&flipped, params).with_label("Vbar")
}

/// `(V̄(1^d) − (2 − nε, 0)) ∪ (V̄(0^d) + (2 + 2ε, 0))`.
pub fn translation_gadget_ov(params: &OvParams) -> PointSet {
    let n_eps = &params.eps * int(params.n as i64);
    let left = shift(&mirrored_vector_gadget(&vec![true; params.d], params), n_eps - int(2), int(0));
    let right = shift(&mirrored_vector_gadget(&vec![false; params.d], params), int(2) + &params.eps * int(2), int(0));
    left.union(&right).with_label("T")
}

pub fn undirected_gadget() -> PointSet {
    PointSet::new("U", vec![Point::new(Rational::new((-1).into(), 2.into()), 0), Point::new(Rational::new(1.into(), 2.into()), 0)])
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Preprocessed {
    pub instance: OVInstance,
    /// `Some(answer)` when the answer is decided without geometry.
    pub forced: Option<bool>,
    /// Original indices of the kept X and Y vectors.
    pub x_index: Vec<usize>,
    pub y_index: Vec<usize>,
}

/// Removes the vectors that make the gadget arguments fail: a zero vector
/// decides the instance, and all-ones vectors are never orthogonal to anything
/// that remains.
pub fn preprocess_ov(inst: &OVInstance) -> Preprocessed {
    let zero = |v: &Vec<bool>| v.iter().all(|b| !b);
    let ones = |v: &Vec<bool>| v.iter().all(|&b| b);
    let keep = |vs: &[Vec<bool>]| -> Vec<usize> { (0..vs.len()).filter(|&i| !ones(&vs[i])).collect() };

    if inst.x.iter().any(zero) || inst.y.iter().any(zero) {
        return Preprocessed {
            instance: inst.clone(),
            forced: Some(true),
            x_index: (0..inst.m()).collect(),
            y_index: (0..inst.n()).collect(),
        };
    }
    let x_index = keep(&inst.x);
    let y_index = keep(&inst.y);
    if x_index.is_empty() || y_index.is_empty() {
        return Preprocessed { instance: inst.clone(), forced: Some(false), x_index, y_index };
    }
    let pick = |vs: &[Vec<bool>], idx: &[usize]| idx.iter().map(|&i| vs[i].clone()).collect();
    Preprocessed {
        instance: OVInstance { x: pick(&inst.x, &x_index), y: pick(&inst.y, &y_index) },
        forced: None,
        x_index,
        y_index,
    }
}

/// `R(x, y) = (x − y, x + y)`, mapping L1 geometry to L∞ geometry.
pub fn linf_embed(p: &Point) -> Point {
    Point { x: &p.x - &p.y, y: &p.x + &p.y }
}

pub fn linf_unembed(p: &Point) -> Point {
    Point { x: (&p.x + &p.y).half(), y: (&p.y - &p.x).half() }
}

/// Full reduction with the default `ε`. Fails if preprocessing decides the
/// instance; use [`preprocess_ov`] first to handle that case.
pub fn reduce_ov(inst: &OVInstance, norm: Norm) -> Result<(ReductionOutput, Preprocessed, OvParams)> {
    reduce_ov_with(inst, norm, None)
}

pub fn reduce_ov_with(
    inst: &OVInstance,
    norm: Norm,
    eps: Option<Rational>,
) -> Result<(ReductionOutput, Preprocessed, OvParams)> {
    let pre = preprocess_ov(inst);
    if let Some(answer) = pre.forced {
        return Err(Error::InvalidInput(format!(
            "preprocessing decides this instance ({}); no geometry is emitted",
            if answer { "positive" } else { "negative" }
        )));
    }
    let f = &pre.instance;
    let (m, n, d) = (f.m(), f.n(), f.d());
    let params = match eps {
        None => OvParams::new(m, n, d, norm)?,
        Some(e) => OvParams::with_eps(n, d, norm, e)?,
    };
    let eps = &params.eps;
    let row = |i: usize| eps * int(2 * d as i64 * (i as i64 + 1));
    let half_eps = eps / int(2);

    let mut a = Vec::with_capacity(2 * m * d);
    let mut tags_a = Vec::with_capacity(2 * m * d);
    for (i, x) in f.x.iter().enumerate() {
        let g = shift(&vector_gadget(x, &params), -int(1) - &half_eps, row(i));
        tags_a.extend(std::iter::repeat_n(GadgetTag::VectorGadgetLeft(i), g.len()));
        a.extend(g.points);
    }
    let ones = vec![true; d];
    for i in 0..m {
        let g = shift(&vector_gadget(&ones, &params), int(1) + &half_eps, row(i));
        tags_a.extend(std::iter::repeat_n(GadgetTag::VectorGadgetRightDummy(i), g.len()));
        a.extend(g.points);
    }

    let mut b = Vec::with_capacity(n * d + 2 * d + 2);
    let mut tags_b = Vec::with_capacity(n * d + 2 * d + 2);
    for (j, y) in f.y.iter().enumerate() {
        let g = shift(&mirrored_vector_gadget(y, &params), eps * int(j as i64 + 1), int(0));
        tags_b.extend(std::iter::repeat_n(GadgetTag::VectorGadgetB(j), g.len()));
        b.extend(g.points);
    }
    let t = translation_gadget_ov(&params);
    tags_b.extend(std::iter::repeat_n(GadgetTag::TranslationGadget, t.len()));
    b.extend(t.points);
    let u = undirected_gadget();
    tags_b.extend(std::iter::repeat_n(GadgetTag::UndirectedGadget, u.len()));
    b.extend(u.points);

    let (mut a, mut b) = (PointSet::new("A", a), PointSet::new("B", b));
    if params.norm == Norm::Linf {
        a = a.map(linf_embed);
        b = b.map(linf_embed);
    }
    let out = ReductionOutput {
        a,
        b,
        delta: params.delta.clone(),
        norm: params.norm,
        provenance_a: tags_a,
        provenance_b: tags_b,
        preprocessing_note: None,
    };
    Ok((out, pre, params))
}

/// The translation that aligns `V(x_i)` with `V̄(y_j)` (0-based indices into
/// the preprocessed instance), in the coordinates of the emitted instance.
pub fn ov_witness_translation(i: usize, j: usize, params: &OvParams) -> Point {
    let eps = &params.eps;
    let tau = Point::new(
        -(eps * (int(2 * j as i64 + 3) / int(2))),
        eps * int(2 * params.d as i64 * (i as i64 + 1)),
    );
    if params.norm == Norm::Linf {
        linf_embed(&tau)
    } else {
        tau
    }
}

/// Translation in the unrotated L1 frame of the gadgets.
pub fn ov_base_frame(tau: &Point, params: &OvParams) -> Point {
    if params.norm == Norm::Linf {
        linf_unembed(tau)
    } else {
        tau.clone()
    }
}

/// Reads `(i, j)` back from an approximate translation of the emitted instance.
pub fn decode_ov_witness(tau: (f64, f64), params: &OvParams) -> (i64, i64) {
    let tau = if params.norm == Norm::Linf { ((tau.0 + tau.1) / 2.0, (tau.1 - tau.0) / 2.0) } else { tau };
    let eps = ExactScalar::from_rational(params.eps.clone()).to_f64();
    let i = (tau.1 / (2.0 * params.d as f64 * eps)).round() as i64 - 1;
    let j = (-tau.0 / eps - 0.5).round() as i64 - 1;
    (i, j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{undirected_hausdorff, directed_within};
    use crate::scalar::rational;

    fn params(norm: Norm) -> OvParams {
        OvParams::new(1, 1, 2, norm).unwrap()
    }

    fn bits(s: &str) -> Vec<bool> {
        parse_bits(s).unwrap()
    }

    #[test]
    fn vector_gadget_examples() {
        let p = params(Norm::L1);
        let e = p.eps.clone();
        let e2 = &e * &e;
        assert_eq!(
            vector_gadget(&bits("01"), &p).points,
            vec![Point::new(e2.clone(), e.clone()), Point::new(0, &e * int(2))]
        );
        assert_eq!(vector_gadget(&bits("11"), &p).points, vec![Point::new(0, e.clone()), Point::new(0, &e * int(2))]);
        let p3 = OvParams::new(1, 1, 1, Norm::Lp(3)).unwrap();
        assert_eq!(p3.eps, rational(1, 120));
        let e6 = num_traits::pow(p3.eps.clone(), 6);
        assert_eq!(vector_gadget(&bits("0"), &p3).points, vec![Point::new(e6, p3.eps.clone())]);
    }

    #[test]
    fn mirrored_gadget() {
        let p = params(Norm::L1);
        assert_eq!(mirrored_vector_gadget(&bits("01"), &p), vector_gadget(&bits("10"), &p).with_label("Vbar"));
        assert_eq!(mirrored_vector_gadget(&bits("00"), &p).points, vector_gadget(&bits("11"), &p).points);
    }

    #[test]
    fn translation_gadget_shape() {
        let p = OvParams::new(1, 3, 1, Norm::L1).unwrap();
        let t = translation_gadget_ov(&p);
        assert_eq!(t.len(), 2);
        let n_eps = &p.eps * int(3);
        assert_eq!(t.points[0].x, ExactScalar::from_rational(&p.spacing - int(2) + n_eps));
        assert_eq!(t.points[1].x, ExactScalar::from_rational(int(2) + &p.eps * int(2)));
    }

    #[test]
    fn undirected_gadget_is_symmetric() {
        let u = undirected_gadget();
        assert_eq!(u.len(), 2);
        assert_eq!(u.points[0], -&u.points[1]);
    }

    #[test]
    fn preprocessing() {
        let inst = OVInstance::from_strings(&["00"], &["11"]).unwrap();
        assert_eq!(preprocess_ov(&inst).forced, Some(true));
        let inst = OVInstance::from_strings(&["11"], &["11"]).unwrap();
        assert_eq!(preprocess_ov(&inst).forced, Some(false));
        let inst = OVInstance::from_strings(&["10"], &["01"]).unwrap();
        let pre = preprocess_ov(&inst);
        assert_eq!(pre.forced, None);
        assert_eq!(pre.instance, inst);
        let inst = OVInstance::from_strings(&["11", "10"], &["01", "11"]).unwrap();
        let pre = preprocess_ov(&inst);
        assert_eq!((pre.x_index, pre.y_index), (vec![1], vec![0]));
    }

    #[test]
    fn sizes() {
        let inst = OVInstance::from_strings(&["100", "010"], &["001", "110"]).unwrap();
        let (out, _, _) = reduce_ov(&inst, Norm::L1).unwrap();
        assert_eq!(out.a.len(), 12);
        assert_eq!(out.b.len(), 14);
        assert_eq!(out.provenance_a.len(), 12);
        assert_eq!(out.provenance_b.len(), 14);
        assert!(reduce_ov(&OVInstance::from_strings(&["00"], &["10"]).unwrap(), Norm::L1).is_err());
    }

    #[test]
    fn gadget_pair_small() {
        for norm in [Norm::L1, Norm::L2, Norm::Lp(3)] {
            let p = OvParams::new(1, 1, 2, norm).unwrap();
            for v1 in ["00", "01", "10", "11"] {
                for v2 in ["00", "01", "10", "11"] {
                    let g1 = vector_gadget(&bits(v1), &p);
                    let g2 = shift(&mirrored_vector_gadget(&bits(v2), &p), int(1), int(0));
                    let close = undirected_hausdorff(&g1, &g2, norm).unwrap().within(&int(1));
                    let orth = bits(v1).iter().zip(bits(v2)).all(|(a, b)| !(*a && b));
                    assert_eq!(close, orth, "{norm} {v1} {v2}");
                }
            }
        }
    }

    #[test]
    fn witness_translation_is_feasible() {
        let inst = OVInstance::from_strings(&["110", "100"], &["011", "101"]).unwrap();
        for norm in [Norm::L1, Norm::Linf, Norm::L2] {
            let (out, _, params) = reduce_ov(&inst, norm).unwrap();
            // x_1 = 100 is orthogonal to y_0 = 011.
            let tau = ov_witness_translation(1, 0, &params);
            let moved = out.b.translate(&tau);
            assert!(directed_within(&moved, &out.a, &out.delta, norm), "{norm}");
            assert!(directed_within(&out.a, &moved, &out.delta, norm), "{norm}");
            assert_eq!(decode_ov_witness(tau.to_f64(), &params), (1, 0));
        }
    }

    #[test]
    fn linf_embedding_round_trip() {
        let p = Point::new(rational(3, 7), -5);
        assert_eq!(linf_unembed(&linf_embed(&p)), p);
    }

    #[test]
    fn file_round_trip() {
        let inst = OVInstance::parse("101\n011\n\n110\n").unwrap();
        assert_eq!((inst.m(), inst.n(), inst.d()), (2, 1, 3));
        assert_eq!(OVInstance::parse(&inst.to_text()).unwrap(), inst);
        assert!(OVInstance::parse("10\n").is_err());
        assert!(OVInstance::parse("10\n\n1\n").is_err());
        assert!(OVInstance::parse("12\n\n10\n").is_err());
    }
}
