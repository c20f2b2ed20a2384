//! Self-intersection sequences on cycles of boundary curves, the corner
//! blow-up / blow-down calculus, and reduction to the degree 5 model.
//!
//! A structure of degree `d` has a boundary cycle of `n = 10 - d` curves whose
//! self-intersections sum to `3d - 20`. Blowing up a corner (an edge of the
//! cycle) inserts a new `-1` vertex, lowers both endpoints by one and the
//! degree by one; blowing down a `-1` vertex is the inverse move.

use crate::dihedral::{
    conjugate, dihedral_elements, from_permutation, ActionError, CycleAction, DihedralElement,
};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LogK3Error {
    #[error("a cycle needs at least 2 components, got {0}")]
    TooShort(usize),
    #[error("action is on a {action}-cycle but the sequence has length {seq}")]
    LengthMismatch { action: usize, seq: usize },
    #[error("invalid action: {0}")]
    Action(#[from] ActionError),
    #[error("action moves vertex {from} (entry {a}) to vertex {to} (entry {b})")]
    ActionBreaksSequence { from: usize, to: usize, a: i64, b: i64 },
    #[error("ample structure has entry {entry} < -1 at vertex {vertex}")]
    NotAmple { vertex: usize, entry: i64 },
    #[error("ample structure must have degree in 1..=8, got {0}")]
    DegreeOutOfRange(i64),
    #[error("degree {0} is outside the enumerable range 5..=8")]
    EnumerationRange(i64),
    #[error("orbit is empty")]
    EmptyOrbit,
    #[error("index {index} is out of range for a {n}-cycle")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("orbit {orbit:?} is not stable under the action")]
    NotStable { orbit: Vec<usize> },
    #[error("vertex {vertex} has entry {entry}, only -1 curves can be blown down")]
    NotMinusOne { vertex: usize, entry: i64 },
    #[error("blow-down needs at least 3 components, got {0}")]
    CycleTooShortForBlowDown(usize),
    #[error("vertices {0} and {1} in the blow-down orbit are adjacent")]
    AdjacentInOrbit(usize, usize),
    #[error("blow-up would leave an ample structure with degree {0}")]
    DegreeUnderflow(i64),
    #[error("structure is not admissible: {0}")]
    Inadmissible(String),
    #[error("no legal rewrite at degree {degree} with sequence {seq:?}: {reason}")]
    Obstructed {
        degree: i64,
        seq: Vec<i64>,
        reason: String,
    },
}

/// Self-intersection numbers read around the boundary cycle.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SelfIntersectionSeq(pub Vec<i64>);

impl SelfIntersectionSeq {
    pub fn new(entries: Vec<i64>) -> Self {
        SelfIntersectionSeq(entries)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    /// The sequence after relabelling vertex `i` as `g(i)`.
    pub fn relabel(&self, g: DihedralElement) -> Self {
        let n = self.len();
        let mut out = vec![0; n];
        for (i, &a) in self.0.iter().enumerate() {
            out[g.apply(i, n)] = a;
        }
        SelfIntersectionSeq(out)
    }

    /// Lexicographically least image under the `2n` dihedral relabellings.
    pub fn canonical(&self) -> Self {
        let n = self.len();
        if n == 0 {
            return self.clone();
        }
        dihedral_elements(n)
            .into_iter()
            .map(|g| self.relabel(g))
            .min()
            .expect("nonempty dihedral group")
    }

    pub fn equivalent(&self, other: &Self) -> bool {
        self.len() == other.len() && self.canonical() == other.canonical()
    }
}

impl From<Vec<i64>> for SelfIntersectionSeq {
    fn from(v: Vec<i64>) -> Self {
        SelfIntersectionSeq(v)
    }
}

/// Intersection numbers of the boundary components.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionMatrix(pub Vec<Vec<i64>>);

impl IntersectionMatrix {
    pub fn determinant(&self) -> i128 {
        bareiss_determinant(&self.0)
    }
}

/// Fraction-free Gaussian elimination; exact for integer matrices.
fn bareiss_determinant(m: &[Vec<i64>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&r| a[r][k] != 0) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

pub fn intersection_matrix(s: &SelfIntersectionSeq) -> Result<IntersectionMatrix, LogK3Error> {
    let n = s.len();
    if n < 2 {
        return Err(LogK3Error::TooShort(n));
    }
    let mut m = vec![vec![0i64; n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = s.0[i];
    }
    // One shared point per edge; for n = 2 both edges join the same pair.
    for i in 0..n {
        let j = (i + 1) % n;
        m[i][j] += 1;
        m[j][i] += 1;
    }
    Ok(IntersectionMatrix(m))
}

/// The boundary components form a lattice basis iff the intersection form is
/// unimodular.
pub fn unimodular_check(s: &SelfIntersectionSeq) -> bool {
    intersection_matrix(s)
        .map(|m| m.determinant().abs() == 1)
        .unwrap_or(false)
}

/// All sequences for degree `d` with entries `>= -1`, the right sum, and a
/// unimodular intersection form, one canonical representative per dihedral
/// class, sorted.
pub fn enumerate_admissible(d: i64) -> Result<Vec<SelfIntersectionSeq>, LogK3Error> {
    if !(5..=8).contains(&d) {
        return Err(LogK3Error::EnumerationRange(d));
    }
    let n = (10 - d) as usize;
    let total = 3 * d - 20;
    let max_entry = total + (n as i64 - 1);
    let mut found = BTreeSet::new();
    let mut current = Vec::with_capacity(n);
    fn rec(
        n: usize,
        remaining: i64,
        max_entry: i64,
        current: &mut Vec<i64>,
        found: &mut BTreeSet<SelfIntersectionSeq>,
    ) {
        if current.len() == n - 1 {
            if remaining >= -1 {
                current.push(remaining);
                let s = SelfIntersectionSeq(current.clone());
                if unimodular_check(&s) {
                    found.insert(s.canonical());
                }
                current.pop();
            }
            return;
        }
        for a in -1..=max_entry {
            let slots_left = (n - current.len() - 1) as i64;
            if remaining - a < -slots_left {
                break;
            }
            current.push(a);
            rec(n, remaining - a, max_entry, current, found);
            current.pop();
        }
    }
    rec(n, total, max_entry, &mut current, &mut found);
    Ok(found.into_iter().collect())
}

/// Degree, self-intersection sequence and the Galois action on the boundary
/// cycle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogK3Structure {
    pub degree: i64,
    pub seq: SelfIntersectionSeq,
    pub action: CycleAction,
    pub ample: bool,
}

impl LogK3Structure {
    /// Checks the structural requirements: a valid action on a cycle of the
    /// sequence's length that preserves the entries, and for ample structures
    /// entries `>= -1` with `1 <= d <= 8`. The numerical laws are checked by
    /// [`sum_invariant_check`].
    pub fn new(
        degree: i64,
        seq: SelfIntersectionSeq,
        action: CycleAction,
        ample: bool,
    ) -> Result<Self, LogK3Error> {
        let s = LogK3Structure {
            degree,
            seq,
            action,
            ample,
        };
        s.validate()?;
        Ok(s)
    }

    /// A structure with trivial Galois action.
    pub fn split(degree: i64, entries: Vec<i64>) -> Result<Self, LogK3Error> {
        let n = entries.len();
        Self::new(degree, entries.into(), CycleAction::trivial(n), true)
    }

    pub fn validate(&self) -> Result<(), LogK3Error> {
        let n = self.seq.len();
        if n < 2 {
            return Err(LogK3Error::TooShort(n));
        }
        if self.action.n != n {
            return Err(LogK3Error::LengthMismatch {
                action: self.action.n,
                seq: n,
            });
        }
        self.action.validate()?;
        for g in &self.action.images {
            for i in 0..n {
                let j = g.apply(i, n);
                if self.seq.0[i] != self.seq.0[j] {
                    return Err(LogK3Error::ActionBreaksSequence {
                        from: i,
                        to: j,
                        a: self.seq.0[i],
                        b: self.seq.0[j],
                    });
                }
            }
        }
        if self.ample {
            if let Some((vertex, &entry)) = self.seq.0.iter().enumerate().find(|(_, &a)| a < -1) {
                return Err(LogK3Error::NotAmple { vertex, entry });
            }
            if !(1..=8).contains(&self.degree) {
                return Err(LogK3Error::DegreeOutOfRange(self.degree));
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.seq.len()
    }

    /// The same structure with every vertex `i` renamed `g(i)`.
    pub fn relabel(&self, g: DihedralElement) -> Self {
        LogK3Structure {
            degree: self.degree,
            seq: self.seq.relabel(g),
            action: self.action.relabel(g),
            ample: self.ample,
        }
    }

    /// Equal up to a dihedral relabelling of the cycle (which conjugates the
    /// action).
    pub fn equivalent(&self, other: &Self) -> bool {
        self.degree == other.degree
            && self.n() == other.n()
            && self.action.group == other.action.group
            && dihedral_elements(self.n())
                .into_iter()
                .any(|g| {
                    let r = self.relabel(g);
                    r.seq == other.seq && r.action.images == other.action.images
                })
    }
}

/// `sum a_i = 3d - 20` and `n = 10 - d`.
pub fn sum_invariant_check(s: &LogK3Structure) -> bool {
    s.seq.sum() == 3 * s.degree - 20 && s.n() as i64 == 10 - s.degree
}

fn check_stable(action: &CycleAction, orbit: &[usize], on_edges: bool) -> Result<(), LogK3Error> {
    let n = action.n;
    for g in &action.images {
        for &x in orbit {
            let y = if on_edges { g.apply_edge(x, n) } else { g.apply(x, n) };
            if !orbit.contains(&y) {
                return Err(LogK3Error::NotStable {
                    orbit: orbit.to_vec(),
                });
            }
        }
    }
    Ok(())
}

fn normalize_orbit(orbit: &[usize], n: usize) -> Result<Vec<usize>, LogK3Error> {
    if orbit.is_empty() {
        return Err(LogK3Error::EmptyOrbit);
    }
    let mut o = orbit.to_vec();
    o.sort_unstable();
    o.dedup();
    if let Some(&index) = o.iter().find(|&&x| x >= n) {
        return Err(LogK3Error::IndexOutOfRange { index, n });
    }
    Ok(o)
}

/// Blow up the corners in `edge_orbit` simultaneously.
///
/// The new cycle lists old vertex 0, then the exceptional curve of edge 0 if
/// it is blown up, then old vertex 1, and so on. A vertex on two blown-up
/// edges is lowered twice.
pub fn corner_blow_up(s: &LogK3Structure, edge_orbit: &[usize]) -> Result<LogK3Structure, LogK3Error> {
    let n = s.n();
    let orbit = normalize_orbit(edge_orbit, n)?;
    check_stable(&s.action, &orbit, true)?;
    let k = orbit.len() as i64;
    let degree = s.degree - k;
    if s.ample && degree < 1 {
        return Err(LogK3Error::DegreeUnderflow(degree));
    }

    let blown = |e: usize| orbit.binary_search(&e).is_ok();
    let mut entries = Vec::with_capacity(n + orbit.len());
    let mut pos_v = vec![0usize; n];
    let mut pos_e = vec![usize::MAX; n];
    for i in 0..n {
        let incident = usize::from(blown(i)) + usize::from(blown((i + n - 1) % n));
        pos_v[i] = entries.len();
        entries.push(s.seq.0[i] - incident as i64);
        if blown(i) {
            pos_e[i] = entries.len();
            entries.push(-1);
        }
    }
    let m = entries.len();
    if s.ample {
        if let Some((vertex, &entry)) = entries.iter().enumerate().find(|(_, &a)| a < -1) {
            return Err(LogK3Error::NotAmple { vertex, entry });
        }
    }

    let mut images = Vec::with_capacity(s.action.images.len());
    for g in &s.action.images {
        let mut perm = vec![0usize; m];
        for i in 0..n {
            perm[pos_v[i]] = pos_v[g.apply(i, n)];
            if blown(i) {
                perm[pos_e[i]] = pos_e[g.apply_edge(i, n)];
            }
        }
        let image = from_permutation(&perm, None)
            .expect("blow-up of a stable orbit induces a cycle symmetry");
        images.push(image);
    }
    let action = CycleAction {
        n: m,
        group: s.action.group.clone(),
        images,
    };
    LogK3Structure::new(degree, entries.into(), action, s.ample)
}

/// Positions of the new `-1` curves after blowing up `edge_orbit` on an
/// `n`-cycle, in the labelling used by [`corner_blow_up`].
pub fn inserted_vertices(n: usize, edge_orbit: &[usize]) -> Vec<usize> {
    let mut out = Vec::new();
    let mut pos = 0;
    for i in 0..n {
        pos += 1;
        if edge_orbit.contains(&i) {
            out.push(pos);
            pos += 1;
        }
    }
    out
}

/// Blow down the `-1` curves in `vertex_orbit` simultaneously.
pub fn corner_blow_down(s: &LogK3Structure, vertex_orbit: &[usize]) -> Result<LogK3Structure, LogK3Error> {
    let n = s.n();
    if n < 3 {
        return Err(LogK3Error::CycleTooShortForBlowDown(n));
    }
    let orbit = normalize_orbit(vertex_orbit, n)?;
    for &v in &orbit {
        if s.seq.0[v] != -1 {
            return Err(LogK3Error::NotMinusOne {
                vertex: v,
                entry: s.seq.0[v],
            });
        }
    }
    for (idx, &u) in orbit.iter().enumerate() {
        for &w in &orbit[idx + 1..] {
            if (u + 1) % n == w || (w + 1) % n == u {
                return Err(LogK3Error::AdjacentInOrbit(u, w));
            }
        }
    }
    check_stable(&s.action, &orbit, false)?;

    let removed = |v: usize| orbit.binary_search(&v).is_ok();
    let mut bumped = s.seq.0.clone();
    for &w in &orbit {
        bumped[(w + n - 1) % n] += 1;
        bumped[(w + 1) % n] += 1;
    }
    let kept: Vec<usize> = (0..n).filter(|&v| !removed(v)).collect();
    let m = kept.len();
    let mut new_index = vec![usize::MAX; n];
    for (j, &v) in kept.iter().enumerate() {
        new_index[v] = j;
    }
    let entries: Vec<i64> = kept.iter().map(|&v| bumped[v]).collect();
    // Old edge e lies in the new edge starting at the nearest kept vertex at or
    // before e; removed vertices are isolated so that is e or e - 1.
    let segment_of_edge = |e: usize| {
        if removed(e) {
            new_index[(e + n - 1) % n]
        } else {
            new_index[e]
        }
    };

    let mut images = Vec::with_capacity(s.action.images.len());
    for g in &s.action.images {
        let perm: Vec<usize> = kept.iter().map(|&v| new_index[g.apply(v, n)]).collect();
        let edge_perm: Vec<usize> = kept
            .iter()
            .map(|&v| segment_of_edge(g.apply_edge(v, n)))
            .collect();
        let image = from_permutation(&perm, Some(&edge_perm))
            .expect("blow-down of a stable orbit induces a cycle symmetry");
        images.push(image);
    }
    let action = CycleAction {
        n: m,
        group: s.action.group.clone(),
        images,
    };
    LogK3Structure::new(s.degree + orbit.len() as i64, entries.into(), action, s.ample)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RewriteOp {
    BlowUp,
    BlowDown,
}

/// One step of a reduction trace. Orbits index into the structure before the
/// step; `result_seq` is the sequence after it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rewrite {
    pub op: RewriteOp,
    pub orbit: Vec<usize>,
    pub result_seq: Vec<i64>,
}

impl Rewrite {
    pub fn apply(&self, s: &LogK3Structure) -> Result<LogK3Structure, LogK3Error> {
        match self.op {
            RewriteOp::BlowUp => corner_blow_up(s, &self.orbit),
            RewriteOp::BlowDown => corner_blow_down(s, &self.orbit),
        }
    }
}

/// Is `s` an ample structure whose sequence appears in the admissible table?
pub fn check_admissible(s: &LogK3Structure) -> Result<(), LogK3Error> {
    if !s.ample {
        return Err(LogK3Error::Inadmissible("structure is not ample".into()));
    }
    if !sum_invariant_check(s) {
        return Err(LogK3Error::Inadmissible(format!(
            "degree {} with sequence {:?} violates n = 10 - d or sum = 3d - 20",
            s.degree, s.seq.0
        )));
    }
    let table = enumerate_admissible(s.degree)?;
    if !table.contains(&s.seq.canonical()) {
        return Err(LogK3Error::Inadmissible(format!(
            "sequence {:?} is not admissible in degree {}",
            s.seq.0, s.degree
        )));
    }
    Ok(())
}

/// The next move of the reduction, chosen as in the classification argument.
fn next_reduction_step(s: &LogK3Structure) -> Result<Option<(RewriteOp, Vec<usize>)>, LogK3Error> {
    let n = s.n();
    let a = &s.seq.0;
    let obstructed = |reason: &str| LogK3Error::Obstructed {
        degree: s.degree,
        seq: a.clone(),
        reason: reason.to_string(),
    };
    let edge_between = |x: i64, y: i64| {
        (0..n).find(|&e| {
            let (u, v) = (a[e], a[(e + 1) % n]);
            (u, v) == (x, y) || (u, v) == (y, x)
        })
    };
    let step = match (s.degree, s.seq.canonical().0.as_slice()) {
        (5, _) => return Ok(None),
        // Blow up both intersection points.
        (8, _) => (RewriteOp::BlowUp, vec![0, 1]),
        // Blow up the two corners on the 1-curve.
        (7, [0, 0, 1]) => {
            let v = a.iter().position(|&x| x == 1).expect("one 1-curve");
            (RewriteOp::BlowUp, vec![(v + n - 1) % n, v])
        }
        // Blow up the corner away from the (-1)-curve.
        (7, [-1, 0, 2]) => {
            let e = edge_between(0, 2).ok_or_else(|| obstructed("no 0-2 corner"))?;
            (RewriteOp::BlowUp, vec![e])
        }
        // Blow up the corner between the two 0-curves.
        (6, [-1, -1, 0, 0]) => {
            let e = edge_between(0, 0).ok_or_else(|| obstructed("no 0-0 corner"))?;
            (RewriteOp::BlowUp, vec![e])
        }
        // Blow down the (-1)-curve between two (-1)-curves.
        (6, [-1, -1, -1, 1]) => {
            let v = (0..n)
                .find(|&v| a[v] == -1 && a[(v + 1) % n] == -1 && a[(v + n - 1) % n] == -1)
                .ok_or_else(|| obstructed("no (-1)-curve with two (-1) neighbours"))?;
            (RewriteOp::BlowDown, vec![v])
        }
        _ => return Err(obstructed("sequence has no reduction rule")),
    };
    Ok(Some(step))
}

/// Rewrite an admissible ample structure down to degree 5, where the boundary
/// is a cycle of five `-1` curves. Returns the final structure and the trace.
pub fn reduce_to_degree5(s: &LogK3Structure) -> Result<(LogK3Structure, Vec<Rewrite>), LogK3Error> {
    s.validate()?;
    let mut current = s.clone();
    let mut trace = Vec::new();
    // The case tree has depth at most 4.
    for _ in 0..8 {
        check_admissible(&current)?;
        let Some((op, orbit)) = next_reduction_step(&current)? else {
            return Ok((current, trace));
        };
        let next = match op {
            RewriteOp::BlowUp => corner_blow_up(&current, &orbit),
            RewriteOp::BlowDown => corner_blow_down(&current, &orbit),
        }
        .map_err(|e| LogK3Error::Obstructed {
            degree: current.degree,
            seq: current.seq.0.clone(),
            reason: e.to_string(),
        })?;
        trace.push(Rewrite {
            op,
            orbit,
            result_seq: next.seq.0.clone(),
        });
        current = next;
    }
    Err(LogK3Error::Obstructed {
        degree: current.degree,
        seq: current.seq.0.clone(),
        reason: "reduction did not terminate".into(),
    })
}

/// Every rewrite of `s` that keeps the structure ample: blow-ups of stable
/// corner sets and blow-downs of stable, pairwise non-adjacent `-1` sets.
pub fn legal_moves(s: &LogK3Structure) -> Vec<(Rewrite, LogK3Structure)> {
    let n = s.n();
    let mut out = Vec::new();
    for mask in 1u32..(1 << n) {
        let subset: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
        for op in [RewriteOp::BlowUp, RewriteOp::BlowDown] {
            let result = match op {
                RewriteOp::BlowUp => corner_blow_up(s, &subset),
                RewriteOp::BlowDown => corner_blow_down(s, &subset),
            };
            if let Ok(next) = result {
                out.push((
                    Rewrite {
                        op,
                        orbit: subset.clone(),
                        result_seq: next.seq.0.clone(),
                    },
                    next,
                ));
            }
        }
    }
    out
}

/// The dihedral element `g` with `g * x * g^-1 = y` for every image, if any.
pub fn conjugating_element(x: &CycleAction, y: &CycleAction) -> Option<DihedralElement> {
    if x.n != y.n || x.images.len() != y.images.len() {
        return None;
    }
    let n = x.n;
    dihedral_elements(n).into_iter().find(|&g| {
        x.images
            .iter()
            .zip(&y.images)
            .all(|(&a, &b)| conjugate(g, a, n) == b)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(v: &[i64]) -> SelfIntersectionSeq {
        SelfIntersectionSeq(v.to_vec())
    }

    fn split(d: i64, v: &[i64]) -> LogK3Structure {
        LogK3Structure::split(d, v.to_vec()).unwrap()
    }

    #[test]
    fn sum_invariant_examples() {
        assert!(sum_invariant_check(&split(5, &[-1; 5])));
        assert!(sum_invariant_check(&split(8, &[3, 1])));
        assert!(!sum_invariant_check(&split(7, &[0, 0, 2])));
    }

    #[test]
    fn intersection_matrix_examples() {
        let m = intersection_matrix(&seq(&[3, 1])).unwrap();
        assert_eq!(m.0, vec![vec![3, 2], vec![2, 1]]);
        assert_eq!(m.determinant(), -1);
        let m = intersection_matrix(&seq(&[2, 2])).unwrap();
        assert_eq!(m.0, vec![vec![2, 2], vec![2, 2]]);
        assert_eq!(m.determinant(), 0);
        let m = intersection_matrix(&seq(&[-1; 5])).unwrap();
        assert_eq!(m.determinant(), 1);
        assert!(m.0.iter().enumerate().all(|(i, r)| r[(i + 1) % 5] == 1 && r[(i + 2) % 5] == 0));
        assert_eq!(intersection_matrix(&seq(&[1])), Err(LogK3Error::TooShort(1)));
    }

    /// Cofactor expansion, independent of the elimination used above.
    fn det_cofactor(m: &[Vec<i64>]) -> i64 {
        let n = m.len();
        if n == 1 {
            return m[0][0];
        }
        (0..n)
            .map(|j| {
                let minor: Vec<Vec<i64>> = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect())
                    .collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * m[0][j] * det_cofactor(&minor)
            })
            .sum()
    }

    #[test]
    fn bareiss_agrees_with_cofactor_expansion() {
        let mut state = 12345u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 33) % 9) as i64 - 4
        };
        for n in 1..6 {
            for _ in 0..200 {
                let m: Vec<Vec<i64>> = (0..n).map(|_| (0..n).map(|_| next()).collect()).collect();
                assert_eq!(bareiss_determinant(&m), det_cofactor(&m) as i128);
            }
        }
    }

    #[test]
    fn unimodular_examples() {
        assert!(unimodular_check(&seq(&[0, 0, 1])));
        assert!(!unimodular_check(&seq(&[-1, 1, 1])));
        assert!(!unimodular_check(&seq(&[-1, 0, -1, 0])));
    }

    #[test]
    fn admissible_tables() {
        assert_eq!(enumerate_admissible(8).unwrap(), vec![seq(&[1, 3])]);
        assert!(enumerate_admissible(8).unwrap()[0].equivalent(&seq(&[3, 1])));
        assert_eq!(enumerate_admissible(7).unwrap(), vec![seq(&[-1, 0, 2]), seq(&[0, 0, 1])]);
        assert_eq!(
            enumerate_admissible(6).unwrap(),
            vec![seq(&[-1, -1, -1, 1]), seq(&[-1, -1, 0, 0])]
        );
        assert_eq!(enumerate_admissible(5).unwrap(), vec![seq(&[-1; 5])]);
        assert_eq!(enumerate_admissible(4), Err(LogK3Error::EnumerationRange(4)));
        assert_eq!(enumerate_admissible(9), Err(LogK3Error::EnumerationRange(9)));
    }

    /// The exclusion argument by blow-downs: a sequence of degree d < 8 is
    /// possible only if blowing down any single -1 curve lands on a possible
    /// sequence of degree d + 1, and in degree 8 only if the form is unimodular.
    fn possible_by_blow_down(d: i64, s: &[i64]) -> bool {
        let n = s.len();
        if d == 8 {
            return unimodular_check(&seq(s));
        }
        let minus_ones: Vec<usize> = (0..n).filter(|&i| s[i] == -1).collect();
        if minus_ones.is_empty() {
            return unimodular_check(&seq(s));
        }
        minus_ones.iter().all(|&v| {
            let mut b = s.to_vec();
            b[(v + n - 1) % n] += 1;
            b[(v + 1) % n] += 1;
            b.remove(v);
            possible_by_blow_down(d + 1, &b)
        })
    }

    #[test]
    fn unimodularity_agrees_with_blow_down_exclusions() {
        for d in 6..=8 {
            let n = (10 - d) as usize;
            let total = 3 * d - 20;
            let mut by_exclusion = BTreeSet::new();
            let mut stack = vec![vec![]];
            while let Some(p) = stack.pop() {
                if p.len() == n {
                    if p.iter().sum::<i64>() == total && possible_by_blow_down(d, &p) {
                        by_exclusion.insert(seq(&p).canonical());
                    }
                    continue;
                }
                for a in -1..=(total + n as i64) {
                    let mut q = p.clone();
                    q.push(a);
                    stack.push(q);
                }
            }
            let table: BTreeSet<_> = enumerate_admissible(d).unwrap().into_iter().collect();
            assert_eq!(by_exclusion, table, "degree {d}");
        }
    }

    #[test]
    fn blow_up_examples() {
        // (0,0,1): the 1-curve is vertex 2, its corners are edges 1 and 2.
        let swap = CycleAction::involution(3, DihedralElement::reflection(1));
        let d7 = LogK3Structure::new(7, seq(&[0, 0, 1]), swap.clone(), true).unwrap();
        let d5 = corner_blow_up(&d7, &[1, 2]).unwrap();
        assert_eq!(d5.degree, 5);
        assert_eq!(d5.seq, seq(&[-1; 5]));
        assert!(sum_invariant_check(&d5));

        let d6 = split(6, &[-1, -1, 0, 0]);
        let d5 = corner_blow_up(&d6, &[2]).unwrap();
        assert_eq!((d5.degree, d5.seq.clone()), (5, seq(&[-1; 5])));

        let d8 = split(8, &[3, 1]);
        let d6 = corner_blow_up(&d8, &[0, 1]).unwrap();
        assert_eq!((d6.degree, d6.seq.clone()), (6, seq(&[1, -1, -1, -1])));
    }

    #[test]
    fn blow_up_errors() {
        let swap = CycleAction::involution(3, DihedralElement::reflection(1));
        let d7 = LogK3Structure::new(7, seq(&[0, 0, 1]), swap, true).unwrap();
        // Edge 1 alone is swapped with edge 2.
        assert!(matches!(corner_blow_up(&d7, &[1]), Err(LogK3Error::NotStable { .. })));
        assert_eq!(corner_blow_up(&d7, &[]), Err(LogK3Error::EmptyOrbit));
        let d5 = split(5, &[-1; 5]);
        assert!(matches!(corner_blow_up(&d5, &[0]), Err(LogK3Error::DegreeUnderflow(4)) | Err(LogK3Error::NotAmple { .. })));
        let d6 = split(6, &[-1, -1, 0, 0]);
        assert!(matches!(corner_blow_up(&d6, &[0]), Err(LogK3Error::NotAmple { .. })));
        assert!(matches!(corner_blow_up(&d6, &[9]), Err(LogK3Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn blow_down_undoes_blow_up() {
        let swap = CycleAction::involution(3, DihedralElement::reflection(1));
        let d7 = LogK3Structure::new(7, seq(&[0, 0, 1]), swap, true).unwrap();
        let up = corner_blow_up(&d7, &[1, 2]).unwrap();
        assert_eq!(inserted_vertices(3, &[1, 2]), vec![2, 4]);
        assert_eq!(corner_blow_down(&up, &[2, 4]).unwrap(), d7);

        let d8 = split(8, &[3, 1]);
        let up = corner_blow_up(&d8, &[0, 1]).unwrap();
        assert_eq!(corner_blow_down(&up, &inserted_vertices(2, &[0, 1])).unwrap(), d8);
    }

    #[test]
    fn blow_down_examples() {
        let d6 = split(6, &[-1, -1, -1, 1]);
        let d7 = corner_blow_down(&d6, &[1]).unwrap();
        assert_eq!((d7.degree, d7.seq.clone()), (7, seq(&[0, 0, 1])));

        let d6 = split(6, &[1, -1, -1, -1]);
        let d7 = corner_blow_down(&d6, &[1]).unwrap();
        assert_eq!(d7.seq, seq(&[2, 0, -1]));
        assert!(d7.seq.equivalent(&seq(&[-1, 0, 2])));

        let d5 = split(5, &[-1; 5]);
        let d6 = corner_blow_down(&d5, &[0]).unwrap();
        assert_eq!(d6.seq, seq(&[0, -1, -1, 0]));
        assert!(d6.seq.equivalent(&seq(&[-1, -1, 0, 0])));
        assert_eq!(d6.degree, 6);
    }

    #[test]
    fn blow_down_errors() {
        let d6 = split(6, &[-1, -1, -1, 1]);
        assert!(matches!(corner_blow_down(&d6, &[3]), Err(LogK3Error::NotMinusOne { .. })));
        assert!(matches!(corner_blow_down(&d6, &[0, 1]), Err(LogK3Error::AdjacentInOrbit(0, 1))));
        let d8 = split(8, &[3, 1]);
        assert_eq!(corner_blow_down(&d8, &[0]), Err(LogK3Error::CycleTooShortForBlowDown(2)));
        let refl = CycleAction::involution(5, DihedralElement::reflection(0));
        let d5 = LogK3Structure::new(5, seq(&[-1; 5]), refl, true).unwrap();
        assert!(matches!(corner_blow_down(&d5, &[1]), Err(LogK3Error::NotStable { .. })));
        // Vertices 1 and 4 = -1 are swapped by v -> -v.
        assert!(corner_blow_down(&d5, &[1, 4]).is_ok());
    }

    #[test]
    fn blow_down_to_two_cycle_tracks_edges() {
        let d6 = LogK3Structure::new(
            6,
            seq(&[-1, 0, -1, 0]),
            CycleAction::cyclic_generated_by(4, 2, DihedralElement::rotation(2)),
            false,
        )
        .unwrap();
        let d8 = corner_blow_down(&d6, &[0, 2]).unwrap();
        assert_eq!(d8.seq, seq(&[2, 2]));
        // rot 2 sends kept vertex 1 to kept vertex 3.
        assert_eq!(d8.action.images[1], DihedralElement::rotation(1));
        d8.validate().unwrap();
    }

    #[test]
    fn structure_rejects_incompatible_action() {
        let rot = CycleAction::cyclic_generated_by(3, 3, DihedralElement::rotation(1));
        let err = LogK3Structure::new(7, seq(&[0, 0, 1]), rot, true).unwrap_err();
        assert!(matches!(err, LogK3Error::ActionBreaksSequence { .. }));
        let err = LogK3Structure::new(7, seq(&[0, 0, 1]), CycleAction::trivial(4), true).unwrap_err();
        assert!(matches!(err, LogK3Error::LengthMismatch { .. }));
        let err = LogK3Structure::split(4, vec![-2, 0, 0, 0, 0, 0]).unwrap_err();
        assert!(matches!(err, LogK3Error::NotAmple { .. }));
    }

    #[test]
    fn reduce_examples() {
        let (d5, trace) = reduce_to_degree5(&split(8, &[3, 1])).unwrap();
        assert_eq!(d5.seq, seq(&[-1; 5]));
        assert_eq!(d5.degree, 5);
        assert!(d5.action.images.iter().all(|g| *g == DihedralElement::IDENTITY));
        let ops: Vec<_> = trace.iter().map(|r| r.op).collect();
        assert_eq!(ops, vec![RewriteOp::BlowUp, RewriteOp::BlowDown, RewriteOp::BlowUp]);
        assert_eq!(trace[0].orbit, vec![0, 1]);

        let swap = CycleAction::involution(3, DihedralElement::reflection(1));
        let d7 = LogK3Structure::new(7, seq(&[0, 0, 1]), swap, true).unwrap();
        let (d5, trace) = reduce_to_degree5(&d7).unwrap();
        assert_eq!(trace.len(), 1);
        assert_eq!(d5.seq, seq(&[-1; 5]));
        assert!(d5.action.images[1].refl);

        let z5 = CycleAction::cyclic_generated_by(5, 5, DihedralElement::rotation(1));
        let s = LogK3Structure::new(5, seq(&[-1; 5]), z5, true).unwrap();
        let (out, trace) = reduce_to_degree5(&s).unwrap();
        assert!(trace.is_empty());
        assert_eq!(out, s);
    }

    #[test]
    fn reduce_rejects_inadmissible() {
        let s = split(7, &[-1, 1, 1]);
        assert!(matches!(reduce_to_degree5(&s), Err(LogK3Error::Inadmissible(_))));
        let s = split(7, &[0, 0, 2]);
        assert!(matches!(reduce_to_degree5(&s), Err(LogK3Error::Inadmissible(_))));
        let mut s = split(8, &[3, 1]);
        s.ample = false;
        assert!(matches!(reduce_to_degree5(&s), Err(LogK3Error::Inadmissible(_))));
    }

    #[test]
    fn relabel_and_equivalence() {
        let s = LogK3Structure::new(
            6,
            seq(&[-1, -1, 0, 0]),
            CycleAction::involution(4, DihedralElement::reflection(1)),
            true,
        )
        .unwrap();
        for g in dihedral_elements(4) {
            let r = s.relabel(g);
            r.validate().unwrap();
            assert!(s.equivalent(&r));
        }
        assert!(!s.equivalent(&split(6, &[-1, -1, 0, 0])));
    }

    #[test]
    fn trace_json_shape() {
        let (_, trace) = reduce_to_degree5(&split(8, &[3, 1])).unwrap();
        let v = serde_json::to_value(&trace).unwrap();
        assert_eq!(v[0]["op"], "blow_up");
        assert_eq!(v[1]["op"], "blow_down");
        assert_eq!(v[0]["result_seq"], serde_json::json!([1, -1, -1, -1]));
        let s = split(8, &[3, 1]);
        let v = serde_json::to_value(&s).unwrap();
        assert_eq!(v["seq"], serde_json::json!([3, 1]));
        assert_eq!(v["ample"], true);
    }
}
