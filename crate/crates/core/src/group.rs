//! Finite groups given by their full multiplication table.

use serde::{Deserialize, Serialize};
use std::collections::VecDeque;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("table has {rows} rows but order is {order}")]
    Shape { order: usize, rows: usize },
    #[error("table entry ({0}, {1}) is out of range")]
    EntryOutOfRange(usize, usize),
    #[error("element 0 is not a two-sided identity")]
    NoIdentity,
    #[error("element {0} has no inverse")]
    NoInverse(usize),
    #[error("associativity fails at ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("generator {0} is out of range")]
    BadGenerator(usize),
    #[error("generators only span {spanned} of {order} elements")]
    GeneratorsDoNotSpan { spanned: usize, order: usize },
    #[error("unknown group name {0:?}")]
    UnknownName(String),
}

/// A finite group stored as a multiplication table over indices `0..order`.
///
/// Index 0 is always the identity; `table[i][j]` is the index of `i * j`.
///
/// Deserializes from the full table or from a name accepted by
/// [`FiniteGroup::by_name`]; tables are validated on input.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GroupRepr")]
pub struct FiniteGroup {
    pub order: usize,
    pub table: Vec<Vec<usize>>,
    pub generators: Vec<usize>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum GroupRepr {
    Name(String),
    Table {
        table: Vec<Vec<usize>>,
        generators: Vec<usize>,
    },
}

impl TryFrom<GroupRepr> for FiniteGroup {
    type Error = GroupError;

    fn try_from(r: GroupRepr) -> Result<Self, Self::Error> {
        match r {
            GroupRepr::Name(name) => FiniteGroup::by_name(&name),
            GroupRepr::Table { table, generators } => FiniteGroup::new(table, generators),
        }
    }
}

impl FiniteGroup {
    /// Build and validate a group from raw table data.
    pub fn new(table: Vec<Vec<usize>>, generators: Vec<usize>) -> Result<Self, GroupError> {
        let g = FiniteGroup {
            order: table.len(),
            table,
            generators,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn trivial() -> Self {
        FiniteGroup {
            order: 1,
            table: vec![vec![0]],
            generators: vec![],
        }
    }

    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1);
        let table = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        let generators = if n == 1 { vec![] } else { vec![1] };
        FiniteGroup {
            order: n,
            table,
            generators,
        }
    }

    /// The dihedral group of order `2n`; element `k` is `r^k` for `k < n` and
    /// `r^(k-n) s` otherwise, with `s r s = r^-1`.
    pub fn dihedral(n: usize) -> Self {
        assert!(n >= 1);
        let decode = |e: usize| (e % n, e >= n);
        let encode = |rot: usize, refl: bool| rot + if refl { n } else { 0 };
        let mut table = vec![vec![0; 2 * n]; 2 * n];
        for (i, row) in table.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                let (a, sa) = decode(i);
                let (b, sb) = decode(j);
                // r^a s^sa r^b s^sb = r^(a +- b) s^(sa xor sb)
                let rot = if sa { (a + n - b) % n } else { (a + b) % n };
                *cell = encode(rot, sa ^ sb);
            }
        }
        let generators = if n == 1 { vec![1] } else { vec![1, n] };
        FiniteGroup {
            order: 2 * n,
            table,
            generators,
        }
    }

    /// The quaternion group of order 8: indices 0..4 are 1, i, -1, -i and
    /// 4..8 are j, k, -j, -k.
    pub fn quaternion() -> Self {
        // Represent q = i^a j^b (a in 0..4, b in 0..2) with j i = i^3 j, j^2 = i^2.
        let decode = |e: usize| (e % 4, e / 4);
        let encode = |a: usize, b: usize| a + 4 * b;
        let mut table = vec![vec![0; 8]; 8];
        for (x, row) in table.iter_mut().enumerate() {
            for (y, cell) in row.iter_mut().enumerate() {
                let (a1, b1) = decode(x);
                let (a2, b2) = decode(y);
                // i^a1 j^b1 i^a2 j^b2 = i^(a1 + (-1)^b1 a2) j^(b1 + b2)
                let a2s = if b1 == 1 { (4 - a2) % 4 } else { a2 };
                let mut a = (a1 + a2s) % 4;
                let mut b = b1 + b2;
                if b == 2 {
                    b = 0;
                    a = (a + 2) % 4;
                }
                *cell = encode(a, b);
            }
        }
        FiniteGroup {
            order: 8,
            table,
            generators: vec![1, 4],
        }
    }

    /// Direct product; element `(i, j)` has index `i * other.order + j`.
    pub fn product(&self, other: &FiniteGroup) -> Self {
        let m = other.order;
        let order = self.order * m;
        let mut table = vec![vec![0; order]; order];
        for (x, row) in table.iter_mut().enumerate() {
            for (y, cell) in row.iter_mut().enumerate() {
                let (i1, j1) = (x / m, x % m);
                let (i2, j2) = (y / m, y % m);
                *cell = self.table[i1][i2] * m + other.table[j1][j2];
            }
        }
        let mut generators: Vec<usize> = self.generators.iter().map(|&g| g * m).collect();
        generators.extend(other.generators.iter().copied());
        FiniteGroup {
            order,
            table,
            generators,
        }
    }

    /// Look up a group by a short name: `Z<n>`, `D<n>` (order 2n), `V4`,
    /// `Q8`, or products joined by `x` such as `Z2xZ2`.
    pub fn by_name(name: &str) -> Result<Self, GroupError> {
        let unknown = || GroupError::UnknownName(name.to_string());
        let parts: Vec<&str> = name.split(['x', 'X', '*']).collect();
        if parts.len() > 1 {
            let mut acc = FiniteGroup::trivial();
            for part in parts {
                acc = acc.product(&FiniteGroup::by_name(part)?);
            }
            return Ok(acc);
        }
        let name = name.trim();
        match name {
            "1" | "trivial" => return Ok(FiniteGroup::trivial()),
            "V4" => return Ok(FiniteGroup::cyclic(2).product(&FiniteGroup::cyclic(2))),
            "Q8" => return Ok(FiniteGroup::quaternion()),
            "S3" => return Ok(FiniteGroup::dihedral(3)),
            _ => {}
        }
        let (head, digits) = name.split_at(1);
        let n: usize = digits.parse().map_err(|_| unknown())?;
        if n == 0 {
            return Err(unknown());
        }
        match head {
            "Z" | "C" => Ok(FiniteGroup::cyclic(n)),
            "D" => Ok(FiniteGroup::dihedral(n)),
            _ => Err(unknown()),
        }
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        (0..self.order)
            .find(|&b| self.table[a][b] == 0)
            .expect("validated group has inverses")
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.table[x][a];
            k += 1;
        }
        k
    }

    /// Check every group axiom by brute force, plus that the generators span.
    pub fn validate(&self) -> Result<(), GroupError> {
        let n = self.order;
        if self.table.len() != n || n == 0 {
            return Err(GroupError::Shape {
                order: n,
                rows: self.table.len(),
            });
        }
        for (i, row) in self.table.iter().enumerate() {
            if row.len() != n {
                return Err(GroupError::Shape { order: n, rows: row.len() });
            }
            if let Some(j) = row.iter().position(|&e| e >= n) {
                return Err(GroupError::EntryOutOfRange(i, j));
            }
        }
        if (0..n).any(|i| self.table[0][i] != i || self.table[i][0] != i) {
            return Err(GroupError::NoIdentity);
        }
        for a in 0..n {
            if !(0..n).any(|b| self.table[a][b] == 0 && self.table[b][a] == 0) {
                return Err(GroupError::NoInverse(a));
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = self.table[a][b];
                for c in 0..n {
                    if self.table[ab][c] != self.table[a][self.table[b][c]] {
                        return Err(GroupError::NotAssociative(a, b, c));
                    }
                }
            }
        }
        if let Some(&g) = self.generators.iter().find(|&&g| g >= n) {
            return Err(GroupError::BadGenerator(g));
        }
        let spanned = self.word_tree().iter().filter(|w| w.is_some()).count();
        if spanned != n {
            return Err(GroupError::GeneratorsDoNotSpan { spanned, order: n });
        }
        Ok(())
    }

    /// Breadth-first spanning tree over the Cayley graph: entry `e` holds
    /// `(parent, generator position)` with `e = parent * generators[pos]`.
    /// The identity maps to `Some((0, usize::MAX))`.
    pub(crate) fn word_tree(&self) -> Vec<Option<(usize, usize)>> {
        let mut tree = vec![None; self.order];
        tree[0] = Some((0, usize::MAX));
        let mut queue = VecDeque::from([0usize]);
        while let Some(e) = queue.pop_front() {
            for (pos, &g) in self.generators.iter().enumerate() {
                let next = self.table[e][g];
                if tree[next].is_none() {
                    tree[next] = Some((e, pos));
                    queue.push_back(next);
                }
            }
        }
        tree
    }

    /// Every homomorphism into `target`, found by trying all generator images
    /// and extending along the Cayley spanning tree. Each entry maps element
    /// index to target index.
    pub fn homomorphisms_to(&self, target: &FiniteGroup) -> Vec<Vec<usize>> {
        let tree = self.word_tree();
        // Order elements so every parent precedes its children.
        let mut order: Vec<usize> = Vec::with_capacity(self.order);
        let mut queue = VecDeque::from([0usize]);
        let mut seen = vec![false; self.order];
        seen[0] = true;
        while let Some(e) = queue.pop_front() {
            order.push(e);
            for &g in &self.generators {
                let next = self.table[e][g];
                if !seen[next] {
                    seen[next] = true;
                    queue.push_back(next);
                }
            }
        }
        let k = self.generators.len();
        let mut out = Vec::new();
        let mut choice = vec![0usize; k];
        loop {
            let mut image = vec![0usize; self.order];
            for &e in order.iter().skip(1) {
                let (parent, pos) = tree[e].expect("spanning tree covers group");
                image[e] = target.table[image[parent]][choice[pos]];
            }
            let is_hom = (0..self.order).all(|a| {
                (0..self.order).all(|b| image[self.table[a][b]] == target.table[image[a]][image[b]])
            });
            if is_hom {
                out.push(image);
            }
            // Odometer over generator images.
            let mut i = 0;
            loop {
                if i == k {
                    return out;
                }
                choice[i] += 1;
                if choice[i] < target.order {
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_by_name_or_table() {
        let g: FiniteGroup = serde_json::from_value("Z2xZ2".into()).unwrap();
        assert_eq!(g, FiniteGroup::by_name("V4").unwrap());
        let v = serde_json::to_value(FiniteGroup::dihedral(5)).unwrap();
        assert_eq!(serde_json::from_value::<FiniteGroup>(v).unwrap(), FiniteGroup::dihedral(5));
        let bad = serde_json::json!({"order": 2, "table": [[0, 1], [1, 1]], "generators": [1]});
        assert!(serde_json::from_value::<FiniteGroup>(bad).is_err());
    }

    #[test]
    fn standard_groups_validate() {
        for name in ["1", "Z2", "Z5", "Z10", "D3", "D4", "D5", "V4", "Q8", "Z2xZ4", "Z3xZ3", "Z2xZ2xZ2"] {
            let g = FiniteGroup::by_name(name).unwrap();
            g.validate().unwrap_or_else(|e| panic!("{name}: {e}"));
        }
        assert_eq!(FiniteGroup::by_name("Q8").unwrap().order, 8);
        assert!(FiniteGroup::by_name("W3").is_err());
    }

    #[test]
    fn broken_tables_are_rejected() {
        // Not associative: a 3-element quasigroup with identity.
        let bad = vec![vec![0, 1, 2], vec![1, 0, 0], vec![2, 0, 0]];
        assert!(FiniteGroup::new(bad, vec![1]).is_err());
        let not_spanning = FiniteGroup {
            generators: vec![2],
            ..FiniteGroup::cyclic(4)
        };
        assert_eq!(
            not_spanning.validate(),
            Err(GroupError::GeneratorsDoNotSpan { spanned: 2, order: 4 })
        );
    }

    #[test]
    fn quaternion_has_one_involution() {
        let q = FiniteGroup::quaternion();
        let involutions = (1..8).filter(|&e| q.element_order(e) == 2).count();
        assert_eq!(involutions, 1);
    }

    #[test]
    fn hom_counts_cyclic_into_cyclic() {
        // |Hom(Z_m, Z_n)| = gcd(m, n)
        for m in 1..7 {
            for n in 1..7 {
                let homs = FiniteGroup::cyclic(m).homomorphisms_to(&FiniteGroup::cyclic(n));
                assert_eq!(homs.len(), num_integer::gcd(m, n), "m={m} n={n}");
            }
        }
    }
}
