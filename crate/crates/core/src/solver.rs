//! Exact decision procedure for the Hausdorff distance under translation.
//!
//! A translation `τ` is feasible when the chosen Hausdorff distance between
//! `A` and `B + τ` is at most `δ`. The feasible set is an intersection, over
//! groups, of unions of closed `δ`-balls ([`ConstraintSystem`]). If it is
//! nonempty, the lexicographically smallest point of each of its components
//! is either the leftmost point of one ball or a vertex where two ball
//! boundaries meet, so testing those candidates (plus all ball centers and
//! polygon corners) decides feasibility exactly.
//!
//! Every candidate is first screened with `f64` arithmetic carrying an explicit
//! rounding-error bound. The screen only discards candidates that are provably
//! infeasible, so the exact test sees the same candidates in the same order as
//! the unfiltered enumeration of [`generate_candidates`].

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::ControlFlow;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{directed_within, distance_key, Norm, Point, PointSet};
use crate::scalar::{format_rational, int, ExactScalar, RadicalExpr, Rational};

/// Which Hausdorff distance is constrained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    /// `δ⃗H(A, B + τ) ≤ δ`.
    AToB,
    /// `δ⃗H(B + τ, A) ≤ δ`.
    BToA,
    /// `δH(A, B + τ) ≤ δ`.
    Undirected,
}

impl Direction {
    pub const ALL: [Direction; 3] = [Direction::AToB, Direction::BToA, Direction::Undirected];
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::AToB => "ab",
            Direction::BToA => "ba",
            Direction::Undirected => "und",
        })
    }
}

impl FromStr for Direction {
    type Err = Error;
    fn from_str(s: &str) -> Result<Direction> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ab" | "a_to_b" | "atob" => Ok(Direction::AToB),
            "ba" | "b_to_a" | "btoa" => Ok(Direction::BToA),
            "und" | "undirected" => Ok(Direction::Undirected),
            _ => Err(Error::Parse(format!("unknown direction `{s}` (expected ab, ba or und)"))),
        }
    }
}

/// A closed ball `{τ : ‖τ − center‖ ≤ radius}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ball {
    pub center: Point,
    pub radius: Rational,
    pub norm: Norm,
}

/// Feasible translations = ⋂ over groups of (⋃ of the group's balls).
///
/// All balls share `radius` and `norm`. Centers are stored once in `centers`
/// and groups refer to them by index.
#[derive(Clone, Debug)]
pub struct ConstraintSystem {
    pub norm: Norm,
    pub radius: Rational,
    pub centers: Vec<Point>,
    pub groups: Vec<Vec<usize>>,
}

impl ConstraintSystem {
    pub fn group_count(&self) -> usize {
        self.groups.len()
    }

    pub fn ball_count(&self) -> usize {
        self.groups.iter().map(Vec::len).sum()
    }

    pub fn group(&self, g: usize) -> Vec<Ball> {
        self.groups[g]
            .iter()
            .map(|&c| Ball { center: self.centers[c].clone(), radius: self.radius.clone(), norm: self.norm })
            .collect()
    }
}

pub fn build_constraints(
    a: &PointSet,
    b: &PointSet,
    delta: &Rational,
    norm: Norm,
    dir: Direction,
) -> Result<ConstraintSystem> {
    for set in [a, b] {
        if set.is_empty() {
            return Err(Error::EmptyPointSet(set.label.clone()));
        }
    }
    if *delta <= int(0) {
        return Err(Error::InvalidInput("delta must be positive".into()));
    }
    let mut index: HashMap<Point, usize> = HashMap::new();
    let mut centers = Vec::new();
    let mut intern = |p: Point| -> usize {
        *index.entry(p.clone()).or_insert_with(|| {
            centers.push(p);
            centers.len() - 1
        })
    };
    let mut groups = Vec::new();
    if matches!(dir, Direction::AToB | Direction::Undirected) {
        for p in a.iter() {
            groups.push(b.iter().map(|q| intern(p - q)).collect());
        }
    }
    if matches!(dir, Direction::BToA | Direction::Undirected) {
        for q in b.iter() {
            groups.push(a.iter().map(|p| intern(p - q)).collect());
        }
    }
    Ok(ConstraintSystem { norm: norm.canonical(), radius: delta.clone(), centers, groups })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Branch {
    Plus,
    Minus,
}

/// A translation to test: an exact point of Q(√2)², or one branch of
/// `mid ± √h2 · dir` for a circle-circle intersection.
#[derive(Clone, PartialEq, Eq)]
pub enum CandidateTranslation {
    Exact(Point),
    Radical { mid: Point, dir: Point, h2: ExactScalar, branch: Branch },
}

impl CandidateTranslation {
    pub fn exact_point(&self) -> Option<&Point> {
        match self {
            CandidateTranslation::Exact(p) => Some(p),
            CandidateTranslation::Radical { .. } => None,
        }
    }

    pub fn approx(&self) -> (f64, f64) {
        match self {
            CandidateTranslation::Exact(p) => p.to_f64(),
            CandidateTranslation::Radical { mid, dir, h2, branch } => {
                let h = h2.to_f64().max(0.0).sqrt();
                let s = if *branch == Branch::Plus { h } else { -h };
                let (mx, my) = mid.to_f64();
                let (dx, dy) = dir.to_f64();
                (mx + s * dx, my + s * dy)
            }
        }
    }

    /// Exact sign of `coord(τ) − value` along axis 0 (x) or 1 (y).
    pub fn compare_coordinate(&self, axis: usize, value: &ExactScalar) -> Ordering {
        let pick = |p: &Point| if axis == 0 { p.x.clone() } else { p.y.clone() };
        match self {
            CandidateTranslation::Exact(p) => pick(p).cmp(value),
            CandidateTranslation::Radical { mid, dir, h2, branch } => {
                let s = if *branch == Branch::Plus { 1 } else { -1 };
                let expr = RadicalExpr::new(pick(mid) - value, pick(dir) * ExactScalar::from_int(s), h2.clone());
                expr.sign().expect("h2 is nonnegative by construction")
            }
        }
    }

    /// Exact sign of `a·τx + b·τy − value`.
    pub fn compare_linear(&self, a: &ExactScalar, b: &ExactScalar, value: &ExactScalar) -> Ordering {
        let lin = |p: &Point| a * &p.x + b * &p.y;
        match self {
            CandidateTranslation::Exact(p) => lin(p).cmp(value),
            CandidateTranslation::Radical { mid, dir, h2, branch } => {
                let s = if *branch == Branch::Plus { 1 } else { -1 };
                RadicalExpr::new(lin(mid) - value, lin(dir) * ExactScalar::from_int(s), h2.clone())
                    .sign()
                    .expect("h2 is nonnegative by construction")
            }
        }
    }
}

impl fmt::Display for CandidateTranslation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CandidateTranslation::Exact(p) => write!(f, "tau {} {}", p.x, p.y),
            CandidateTranslation::Radical { mid, dir, h2, branch } => {
                let sign = if *branch == Branch::Plus { '+' } else { '-' };
                write!(f, "tau-radical mid {} {} dir {} {} h2 {} branch {sign}", mid.x, mid.y, dir.x, dir.y, h2)
            }
        }
    }
}

impl fmt::Debug for CandidateTranslation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (x, y) = self.approx();
        write!(f, "{self} (~{x:.6e}, {y:.6e})")
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SolverStats {
    /// Candidates enumerated, including those discarded by the float screen.
    pub candidates_generated: u64,
    /// Candidates that reached the exact membership test.
    pub candidates_tested: u64,
}

impl std::ops::AddAssign for SolverStats {
    fn add_assign(&mut self, rhs: SolverStats) {
        self.candidates_generated += rhs.candidates_generated;
        self.candidates_tested += rhs.candidates_tested;
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecisionResult {
    pub feasible: bool,
    pub witness: Option<CandidateTranslation>,
    pub stats: SolverStats,
}

#[derive(Clone, Debug)]
pub struct SolverOptions {
    /// Worker threads; 1 runs on the calling thread.
    pub workers: usize,
    pub deadline: Option<Instant>,
    /// Disable to test every candidate exactly.
    pub prefilter: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { workers: 1, deadline: None, prefilter: true }
    }
}

/// Exact membership of a candidate in every group of the system.
pub fn test_candidate(tau: &CandidateTranslation, sys: &ConstraintSystem) -> Result<bool> {
    let prepared = ExactCandidate::new(tau, sys)?;
    let mut order = GroupOrder::default();
    Ok(prepared.feasible(sys, &mut order))
}

/// All candidates of the system in canonical order.
pub fn generate_candidates(sys: &ConstraintSystem) -> Vec<CandidateTranslation> {
    let mut out = Vec::new();
    let delta = ExactScalar::from_rational(sys.radius.clone());
    for i in 0..sys.centers.len() {
        out.extend(own_candidates(sys.norm, &sys.centers[i], &delta));
        for j in i + 1..sys.centers.len() {
            for combo in 0..pair_combo_count(sys.norm) {
                out.extend(pair_candidates(sys.norm, &sys.centers[i], &sys.centers[j], &delta, combo));
            }
        }
    }
    out
}

pub fn decide_translation(
    a: &PointSet,
    b: &PointSet,
    delta: &Rational,
    norm: Norm,
    dir: Direction,
) -> Result<DecisionResult> {
    decide_translation_with(a, b, delta, norm, dir, &SolverOptions::default())
}

pub fn decide_translation_with(
    a: &PointSet,
    b: &PointSet,
    delta: &Rational,
    norm: Norm,
    dir: Direction,
    opts: &SolverOptions,
) -> Result<DecisionResult> {
    require_full_decision_norm(norm, "decide_translation")?;
    let sys = build_constraints(a, b, delta, norm, dir)?;
    decide_system(&sys, opts)
}

/// Decides a prebuilt system; the witness is the first feasible candidate in
/// canonical order, independent of the worker count.
pub fn decide_system(sys: &ConstraintSystem, opts: &SolverOptions) -> Result<DecisionResult> {
    require_full_decision_norm(sys.norm, "decide_translation")?;
    let search = Search::new(sys, opts);
    let n = sys.centers.len();
    let blocks: Vec<(usize, usize)> =
        (0..n).step_by(BLOCK).map(|s| (s, (s + BLOCK).min(n))).collect();

    let mut stats = SolverStats::default();
    let finish = |stats, hit: Option<CandidateTranslation>| DecisionResult {
        feasible: hit.is_some(),
        witness: hit,
        stats,
    };

    if opts.workers <= 1 {
        for &block in &blocks {
            let (hit, s) = search.first_in_block(block)?;
            stats += s;
            if hit.is_some() {
                return Ok(finish(stats, hit));
            }
        }
        return Ok(finish(stats, None));
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.workers)
        .build()
        .map_err(|e| Error::Internal(e.to_string()))?;
    for wave in blocks.chunks(opts.workers * 2) {
        let outcomes: Vec<Result<(Option<CandidateTranslation>, SolverStats)>> =
            pool.install(|| wave.par_iter().map(|&block| search.first_in_block(block)).collect());
        for outcome in outcomes {
            let (hit, s) = outcome?;
            stats += s;
            if hit.is_some() {
                return Ok(finish(stats, hit));
            }
        }
    }
    Ok(finish(stats, None))
}

/// Every feasible candidate of the system, in canonical order.
pub fn enumerate_feasible(sys: &ConstraintSystem, opts: &SolverOptions) -> Result<Vec<CandidateTranslation>> {
    require_full_decision_norm(sys.norm, "enumerate_feasible")?;
    let search = Search::new(sys, opts);
    let mut out = Vec::new();
    let mut order = GroupOrder::default();
    let mut stats = SolverStats::default();
    for i in 0..sys.centers.len() {
        search.check_deadline()?;
        let _ = search.scan_index(i, &mut order, &mut stats, &mut |c| {
            out.push(c);
            ControlFlow::Continue(())
        })?;
    }
    Ok(out)
}

/// Exact check of the chosen Hausdorff distance at a fixed translation; works for every `Lp`.
pub fn decide_at_translation(
    a: &PointSet,
    b: &PointSet,
    tau: &Point,
    delta: &Rational,
    norm: Norm,
    dir: Direction,
) -> bool {
    let moved = b.translate(tau);
    let ab = || directed_within(a, &moved, delta, norm);
    let ba = || directed_within(&moved, a, delta, norm);
    match dir {
        Direction::AToB => ab(),
        Direction::BToA => ba(),
        Direction::Undirected => ab() && ba(),
    }
}

/// Like [`decide_at_translation`], for any solver candidate (radical ones need L2).
pub fn decide_at_candidate(
    a: &PointSet,
    b: &PointSet,
    tau: &CandidateTranslation,
    delta: &Rational,
    norm: Norm,
    dir: Direction,
) -> Result<bool> {
    if let CandidateTranslation::Exact(p) = tau {
        return Ok(decide_at_translation(a, b, p, delta, norm, dir));
    }
    if norm.canonical() != Norm::L2 {
        return Err(Error::Internal("radical candidate under a non-Euclidean norm".into()));
    }
    let candidate = ExactCandidate::new(tau, &ConstraintSystem {
        norm: Norm::L2,
        radius: delta.clone(),
        centers: Vec::new(),
        groups: Vec::new(),
    })?;
    // ‖a − (b + τ)‖ ≤ δ  ⇔  τ lies in the ball around a − b.
    let covered = |p: &Point, set: &PointSet, p_in_a: bool| {
        set.iter().any(|q| {
            let center = if p_in_a { p - q } else { q - p };
            candidate.in_ball(&center)
        })
    };
    let ab = || a.iter().all(|p| covered(p, b, true));
    let ba = || b.iter().all(|q| covered(q, a, false));
    Ok(match dir {
        Direction::AToB => ab(),
        Direction::BToA => ba(),
        Direction::Undirected => ab() && ba(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValueBracket {
    /// Either zero or a threshold proven infeasible.
    pub lo: Rational,
    /// A threshold proven feasible.
    pub hi: Rational,
    pub witness: Option<CandidateTranslation>,
    pub decisions: usize,
}

/// Brackets the optimal distance under translation by bisection on `δ`.
pub fn value_bisect(
    a: &PointSet,
    b: &PointSet,
    norm: Norm,
    dir: Direction,
    tol: &Rational,
    opts: &SolverOptions,
) -> Result<ValueBracket> {
    require_full_decision_norm(norm, "value_bisect")?;
    if *tol <= int(0) {
        return Err(Error::InvalidInput("tolerance must be positive".into()));
    }
    let start = at_zero_translation(a, b, norm, dir)?;
    let zero = int(0);
    if start.magnitude.is_zero() {
        return Ok(ValueBracket {
            lo: zero.clone(),
            hi: zero,
            witness: Some(CandidateTranslation::Exact(Point::origin())),
            decisions: 0,
        });
    }
    let mut hi = int(start.approx_distance().ceil().max(1.0) as i64);
    while !start.within(&hi) {
        hi = &hi * int(2);
    }
    let mut lo = zero;
    let mut witness = Some(CandidateTranslation::Exact(Point::origin()));
    let mut decisions = 0;
    let two = int(2);
    while &hi - &lo > *tol {
        let mid = (&lo + &hi) / &two;
        let result = decide_translation_with(a, b, &mid, norm, dir, opts)?;
        decisions += 1;
        if result.feasible {
            hi = mid;
            witness = result.witness;
        } else {
            lo = mid;
        }
    }
    Ok(ValueBracket { lo, hi, witness, decisions })
}

fn at_zero_translation(
    a: &PointSet,
    b: &PointSet,
    norm: Norm,
    dir: Direction,
) -> Result<crate::geometry::DistanceKey> {
    use crate::geometry::directed_hausdorff;
    Ok(match dir {
        Direction::AToB => directed_hausdorff(a, b, norm)?.0,
        Direction::BToA => directed_hausdorff(b, a, norm)?.0,
        Direction::Undirected => crate::geometry::undirected_hausdorff(a, b, norm)?,
    })
}

fn require_full_decision_norm(norm: Norm, operation: &'static str) -> Result<()> {
    match norm.canonical() {
        Norm::L1 | Norm::L2 | Norm::Linf => Ok(()),
        other => Err(Error::UnsupportedNorm { norm: other.to_string(), operation }),
    }
}

const BLOCK: usize = 8;

// ---------------------------------------------------------------------------
// Exact candidate construction.

fn shifted(c: &Point, dx: &ExactScalar, dy: &ExactScalar) -> Point {
    Point { x: &c.x + dx, y: &c.y + dy }
}

fn own_offsets(norm: Norm) -> &'static [(i8, i8)] {
    match norm {
        Norm::L2 => &[(0, 0), (-1, 0)],
        Norm::L1 => &[(0, 0), (-1, 0), (1, 0), (0, -1), (0, 1)],
        _ => &[(0, 0), (-1, -1), (1, -1), (-1, 1), (1, 1)],
    }
}

fn own_candidates(norm: Norm, c: &Point, delta: &ExactScalar) -> Vec<CandidateTranslation> {
    own_offsets(norm)
        .iter()
        .map(|&(sx, sy)| {
            let dx = delta * &ExactScalar::from_int(sx as i64);
            let dy = delta * &ExactScalar::from_int(sy as i64);
            CandidateTranslation::Exact(shifted(c, &dx, &dy))
        })
        .collect()
}

fn pair_combo_count(norm: Norm) -> usize {
    match norm {
        Norm::L2 => 1,
        _ => 8,
    }
}

/// Polygon edge-line crossing for combo `0..8`: which ball supplies which line
/// family and which offsets are used.
fn combo_parts(combo: usize) -> (bool, i64, i64) {
    let swap = combo >= 4;
    let s1 = if combo & 1 == 0 { -1 } else { 1 };
    let s2 = if combo & 2 == 0 { -1 } else { 1 };
    (swap, s1, s2)
}

fn polygon_crossing(norm: Norm, ci: &Point, cj: &Point, delta: &ExactScalar, combo: usize) -> Point {
    let (swap, s1, s2) = combo_parts(combo);
    let (first, second) = if swap { (cj, ci) } else { (ci, cj) };
    let d1 = delta * &ExactScalar::from_int(s1);
    let d2 = delta * &ExactScalar::from_int(s2);
    match norm {
        Norm::L1 => {
            // x + y = s from `first`, x − y = t from `second`.
            let s = &(&first.x + &first.y) + &d1;
            let t = &(&second.x - &second.y) + &d2;
            Point { x: (&s + &t).half(), y: (&s - &t).half() }
        }
        _ => Point { x: &first.x + &d1, y: &second.y + &d2 },
    }
}

fn pair_candidates(
    norm: Norm,
    ci: &Point,
    cj: &Point,
    delta: &ExactScalar,
    combo: usize,
) -> Vec<CandidateTranslation> {
    match norm {
        Norm::L2 => {
            let diff = cj - ci;
            let d2 = diff.norm_squared();
            if d2.is_zero() {
                return vec![CandidateTranslation::Exact(shifted(ci, delta, &ExactScalar::zero()))];
            }
            let four_delta2 = delta.square() * ExactScalar::from_int(4);
            match d2.cmp(&four_delta2) {
                Ordering::Greater => vec![],
                Ordering::Equal => vec![CandidateTranslation::Exact(ci.midpoint(cj))],
                Ordering::Less => {
                    let h2 = delta.square().checked_div(&d2).expect("nonzero") - ExactScalar::from_ratio(1, 4);
                    let mid = ci.midpoint(cj);
                    let dir = diff.perp();
                    [Branch::Plus, Branch::Minus]
                        .into_iter()
                        .map(|branch| CandidateTranslation::Radical {
                            mid: mid.clone(),
                            dir: dir.clone(),
                            h2: h2.clone(),
                            branch,
                        })
                        .collect()
                }
            }
        }
        _ => {
            let p = polygon_crossing(norm, ci, cj, delta, combo);
            let on = |c: &Point| distance_key(&p, c, norm).magnitude == *delta;
            if on(ci) && on(cj) {
                vec![CandidateTranslation::Exact(p)]
            } else {
                vec![]
            }
        }
    }
}

/// A candidate with the per-candidate parts of the ball test precomputed.
struct ExactCandidate<'a> {
    tau: &'a CandidateTranslation,
    norm: Norm,
    threshold: ExactScalar,
    // Radical only: h2·|dir|² and the signed direction.
    h_dir2: ExactScalar,
    signed_dir: Point,
}

impl<'a> ExactCandidate<'a> {
    fn new(tau: &'a CandidateTranslation, sys: &ConstraintSystem) -> Result<Self> {
        let norm = sys.norm.canonical();
        let threshold = norm.threshold_key(&sys.radius);
        let (h_dir2, signed_dir) = match tau {
            CandidateTranslation::Exact(_) => (ExactScalar::zero(), Point::origin()),
            CandidateTranslation::Radical { dir, h2, branch, .. } => {
                if norm != Norm::L2 {
                    return Err(Error::Internal("radical candidate under a non-Euclidean norm".into()));
                }
                if h2.sign() == Ordering::Less {
                    return Err(Error::NegativeRadicand(h2.to_string()));
                }
                let signed = if *branch == Branch::Plus { dir.clone() } else { -dir };
                (h2 * &dir.norm_squared(), signed)
            }
        };
        Ok(ExactCandidate { tau, norm, threshold, h_dir2, signed_dir })
    }

    fn in_ball(&self, center: &Point) -> bool {
        match self.tau {
            CandidateTranslation::Exact(p) => {
                distance_key(p, center, self.norm).magnitude <= self.threshold
            }
            CandidateTranslation::Radical { mid, h2, .. } => {
                // |m + s√h·w − c|² ≤ δ²  ⇔  (δ² − |m−c|² − h|w|²) − 2s(m−c)·w·√h ≥ 0.
                let mc = mid - center;
                let u = &(&self.threshold - &mc.norm_squared()) - &self.h_dir2;
                let v = mc.dot(&self.signed_dir) * ExactScalar::from_int(-2);
                RadicalExpr::new(u, v, h2.clone()).sign().expect("checked radicand") != Ordering::Less
            }
        }
    }

    fn feasible(&self, sys: &ConstraintSystem, order: &mut GroupOrder) -> bool {
        order.all(sys.groups.len(), |g| sys.groups[g].iter().any(|&c| self.in_ball(&sys.centers[c])))
    }
}

/// Checks groups starting from the one that failed most recently.
#[derive(Default)]
struct GroupOrder {
    last_failed: usize,
}

impl GroupOrder {
    fn all(&mut self, count: usize, mut pass: impl FnMut(usize) -> bool) -> bool {
        if count == 0 {
            return true;
        }
        let first = self.last_failed.min(count - 1);
        if !pass(first) {
            return false;
        }
        for g in (0..count).filter(|&g| g != first) {
            if !pass(g) {
                self.last_failed = g;
                return false;
            }
        }
        true
    }
}

// ---------------------------------------------------------------------------
// Floating-point screen.
//
// Every approximate quantity carries an absolute error bound. `UNIT` is a
// generous per-operation relative error (about 9 ulps), and all bounds are
// padded by small constant factors on top of the first-order analysis.

const UNIT: f64 = 1e-15;

struct Approx {
    x: f64,
    y: f64,
    err: f64,
}

struct Search<'a> {
    sys: &'a ConstraintSystem,
    opts: &'a SolverOptions,
    delta: ExactScalar,
    centers: Vec<(f64, f64)>,
    delta_f: f64,
    scale: f64,
    center_err: f64,
}

impl<'a> Search<'a> {
    fn new(sys: &'a ConstraintSystem, opts: &'a SolverOptions) -> Self {
        let delta = ExactScalar::from_rational(sys.radius.clone());
        let centers: Vec<(f64, f64)> = sys.centers.iter().map(Point::to_f64).collect();
        let delta_f = delta.to_f64();
        let scale = sys
            .centers
            .iter()
            .flat_map(|c| [c.x.magnitude_bound(), c.y.magnitude_bound()])
            .fold(delta.magnitude_bound().max(1.0), f64::max);
        Search { sys, opts, delta, centers, delta_f, scale, center_err: UNIT * scale }
    }

    fn check_deadline(&self) -> Result<()> {
        if let Some(deadline) = self.opts.deadline {
            let now = Instant::now();
            if now >= deadline {
                return Err(Error::Timeout);
            }
        }
        Ok(())
    }

    fn first_in_block(&self, (start, end): (usize, usize)) -> Result<(Option<CandidateTranslation>, SolverStats)> {
        let mut order = GroupOrder::default();
        let mut stats = SolverStats::default();
        for i in start..end {
            self.check_deadline()?;
            let mut hit = None;
            let flow = self.scan_index(i, &mut order, &mut stats, &mut |c| {
                hit = Some(c);
                ControlFlow::Break(())
            })?;
            if flow.is_break() {
                return Ok((hit, stats));
            }
        }
        Ok((None, stats))
    }

    /// Visits the feasible candidates owned by center `i` (its own points and
    /// all pairs `(i, j)` with `j > i`) in canonical order.
    fn scan_index(
        &self,
        i: usize,
        order: &mut GroupOrder,
        stats: &mut SolverStats,
        visit: &mut dyn FnMut(CandidateTranslation) -> ControlFlow<()>,
    ) -> Result<ControlFlow<()>> {
        let sys = self.sys;
        let norm = sys.norm;
        let ci = &sys.centers[i];

        let own = own_offsets(norm);
        for (k, &(sx, sy)) in own.iter().enumerate() {
            stats.candidates_generated += 1;
            let (cx, cy) = self.centers[i];
            let approx = Approx {
                x: cx + sx as f64 * self.delta_f,
                y: cy + sy as f64 * self.delta_f,
                err: 4.0 * self.center_err,
            };
            if self.opts.prefilter && self.certainly_infeasible(&approx, order) {
                continue;
            }
            let cand = own_candidates(norm, ci, &self.delta).swap_remove(k);
            if self.exact_feasible(&cand, order, stats)? && visit(cand).is_break() {
                return Ok(ControlFlow::Break(()));
            }
        }

        for j in i + 1..sys.centers.len() {
            let cj = &sys.centers[j];
            let flow = match norm {
                Norm::L2 => self.scan_circle_pair(i, j, ci, cj, order, stats, visit)?,
                _ => self.scan_polygon_pair(i, j, ci, cj, order, stats, visit)?,
            };
            if flow.is_break() {
                return Ok(flow);
            }
        }
        Ok(ControlFlow::Continue(()))
    }

    #[allow(clippy::too_many_arguments)]
    fn scan_circle_pair(
        &self,
        i: usize,
        j: usize,
        ci: &Point,
        cj: &Point,
        order: &mut GroupOrder,
        stats: &mut SolverStats,
        visit: &mut dyn FnMut(CandidateTranslation) -> ControlFlow<()>,
    ) -> Result<ControlFlow<()>> {
        let screened = if self.opts.prefilter { self.screen_circle_pair(i, j, order) } else { PairScreen::Exact(2) };
        let generated = match screened {
            PairScreen::Skip => return Ok(ControlFlow::Continue(())),
            PairScreen::Rejected(n) => {
                stats.candidates_generated += n;
                return Ok(ControlFlow::Continue(()));
            }
            PairScreen::Exact(n) => n,
        };
        let cands = pair_candidates(Norm::L2, ci, cj, &self.delta, 0);
        stats.candidates_generated += if self.opts.prefilter { generated } else { cands.len() as u64 };
        for cand in cands {
            if self.exact_feasible(&cand, order, stats)? && visit(cand).is_break() {
                return Ok(ControlFlow::Break(()));
            }
        }
        Ok(ControlFlow::Continue(()))
    }

    fn screen_circle_pair(&self, i: usize, j: usize, order: &mut GroupOrder) -> PairScreen {
        let (xi, yi) = self.centers[i];
        let (xj, yj) = self.centers[j];
        let e0 = self.center_err;
        let (dx, dy) = (xj - xi, yj - yi);
        let e_diff = 4.0 * e0;
        let d2 = dx * dx + dy * dy;
        let e_d2 = 2.0 * (dx.abs() + dy.abs() + 2.0 * e_diff) * e_diff + 4.0 * UNIT * d2;
        let four_delta2 = 4.0 * self.delta_f * self.delta_f;
        if d2 - e_d2 > four_delta2 * (1.0 + 16.0 * UNIT) {
            return PairScreen::Skip;
        }
        if d2 <= 4.0 * e_d2 || d2 < 1e-280 {
            return PairScreen::Exact(2);
        }
        let ratio = self.delta_f * self.delta_f / d2;
        let h2 = ratio - 0.25;
        let e_h2 = ratio * (e_d2 / (d2 - e_d2) + 6.0 * UNIT) + UNIT;
        if h2 + e_h2 < 0.0 {
            return PairScreen::Skip;
        }
        let h = h2.max(0.0).sqrt();
        let e_h = if h2 > 0.0 { e_h2.sqrt().min(e_h2 / h2.sqrt()) } else { e_h2.sqrt() } + 2.0 * UNIT * h;
        let (wx, wy) = (-dy, dx);
        let (mx, my) = ((xi + xj) * 0.5, (yi + yj) * 0.5);
        let w_abs = wx.abs().max(wy.abs());
        let m_abs = mx.abs().max(my.abs());
        let err = 2.0
            * ((e0 + UNIT * self.scale)
                + e_h * (w_abs + e_diff)
                + h * e_diff
                + 2.0 * UNIT * (m_abs + h * w_abs));
        let plus = Approx { x: mx + h * wx, y: my + h * wy, err };
        let minus = Approx { x: mx - h * wx, y: my - h * wy, err };
        if self.certainly_infeasible(&plus, order) && self.certainly_infeasible(&minus, order) {
            PairScreen::Rejected(2)
        } else {
            PairScreen::Exact(2)
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn scan_polygon_pair(
        &self,
        i: usize,
        j: usize,
        ci: &Point,
        cj: &Point,
        order: &mut GroupOrder,
        stats: &mut SolverStats,
        visit: &mut dyn FnMut(CandidateTranslation) -> ControlFlow<()>,
    ) -> Result<ControlFlow<()>> {
        let norm = self.sys.norm;
        if self.opts.prefilter {
            // Boundaries cannot meet when the centers are more than 2δ apart in this norm.
            let (xi, yi) = self.centers[i];
            let (xj, yj) = self.centers[j];
            let gap = approx_norm(norm, xi - xj, yi - yj);
            let slack = 8.0 * self.center_err + 8.0 * UNIT * (gap + self.scale);
            if gap - slack > 2.0 * self.delta_f * (1.0 + 4.0 * UNIT) {
                return Ok(ControlFlow::Continue(()));
            }
        }
        for combo in 0..8 {
            if self.opts.prefilter {
                let approx = self.approx_crossing(i, j, combo);
                if !self.maybe_on_boundary(&approx, i) || !self.maybe_on_boundary(&approx, j) {
                    continue;
                }
                stats.candidates_generated += 1;
                if self.certainly_infeasible(&approx, order) {
                    continue;
                }
            }
            let cands = pair_candidates(norm, ci, cj, &self.delta, combo);
            if !self.opts.prefilter {
                stats.candidates_generated += cands.len() as u64;
            }
            for cand in cands {
                if self.exact_feasible(&cand, order, stats)? && visit(cand).is_break() {
                    return Ok(ControlFlow::Break(()));
                }
            }
        }
        Ok(ControlFlow::Continue(()))
    }

    fn approx_crossing(&self, i: usize, j: usize, combo: usize) -> Approx {
        let (swap, s1, s2) = combo_parts(combo);
        let (first, second) = if swap { (self.centers[j], self.centers[i]) } else { (self.centers[i], self.centers[j]) };
        let d1 = s1 as f64 * self.delta_f;
        let d2 = s2 as f64 * self.delta_f;
        match self.sys.norm {
            Norm::L1 => {
                let s = first.0 + first.1 + d1;
                let t = second.0 - second.1 + d2;
                Approx { x: (s + t) * 0.5, y: (s - t) * 0.5, err: 8.0 * self.center_err }
            }
            _ => Approx { x: first.0 + d1, y: second.1 + d2, err: 4.0 * self.center_err },
        }
    }

    fn slack(&self, p: &Approx, value: f64) -> f64 {
        2.0 * (p.err + self.center_err) + 8.0 * UNIT * (value + self.scale)
    }

    fn maybe_on_boundary(&self, p: &Approx, c: usize) -> bool {
        let (cx, cy) = self.centers[c];
        let value = approx_norm(self.sys.norm, p.x - cx, p.y - cy);
        (value - self.delta_f).abs() <= self.slack(p, value)
    }

    fn certainly_outside(&self, p: &Approx, c: usize) -> bool {
        let (cx, cy) = self.centers[c];
        let value = approx_norm(self.sys.norm, p.x - cx, p.y - cy);
        value - self.slack(p, value) > self.delta_f * (1.0 + 4.0 * UNIT)
    }

    fn certainly_infeasible(&self, p: &Approx, order: &mut GroupOrder) -> bool {
        let sys = self.sys;
        !order.all(sys.groups.len(), |g| sys.groups[g].iter().any(|&c| !self.certainly_outside(p, c)))
    }

    fn exact_feasible(
        &self,
        cand: &CandidateTranslation,
        order: &mut GroupOrder,
        stats: &mut SolverStats,
    ) -> Result<bool> {
        stats.candidates_tested += 1;
        Ok(ExactCandidate::new(cand, self.sys)?.feasible(self.sys, order))
    }
}

enum PairScreen {
    /// The circles provably do not meet.
    Skip,
    /// The circles may meet but every intersection is provably infeasible.
    Rejected(u64),
    /// Needs the exact construction.
    Exact(u64),
}

fn approx_norm(norm: Norm, dx: f64, dy: f64) -> f64 {
    match norm {
        Norm::L1 => dx.abs() + dy.abs(),
        Norm::L2 => dx.hypot(dy),
        _ => dx.abs().max(dy.abs()),
    }
}

/// Formats a bracket as `lo hi` with exact rationals.
pub fn format_bracket(bracket: &ValueBracket) -> String {
    format!("{} {}", format_rational(&bracket.lo), format_rational(&bracket.hi))
}
