//! Cycle graphs, their dihedral symmetries, and finite-group actions on them.
//!
//! Vertices of an `n`-cycle are `0..n`. Edge `i` joins vertex `i` to vertex
//! `i + 1 mod n`, so an `n = 2` cycle has two distinct edges between the same
//! pair of vertices and the edge index doubles as the multiplicity slot.

use crate::group::{FiniteGroup, GroupError};
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DihedralError {
    #[error("cycle length {0} is too small (need at least 2)")]
    TooSmall(usize),
    #[error("element with rotation {rot} is not reduced mod {n}")]
    ModulusMismatch { rot: usize, n: usize },
    #[error("vertices {v0} and {v1} are not neighbours on the {n}-cycle")]
    NotNeighbours { v0: usize, v1: usize, n: usize },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ActionError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Dihedral(#[from] DihedralError),
    #[error("{images} images given for a group of order {order}")]
    WrongImageCount { images: usize, order: usize },
    #[error("identity maps to {0}, not the identity")]
    IdentityNotFixed(DihedralElement),
    #[error("not a homomorphism: image of {a}*{b} is {got}, expected {want}")]
    NotHomomorphism {
        a: usize,
        b: usize,
        got: DihedralElement,
        want: DihedralElement,
    },
}

/// An `n`-cycle; `n >= 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CycleGraph {
    n: usize,
}

impl CycleGraph {
    pub fn new(n: usize) -> Result<Self, DihedralError> {
        if n < 2 {
            return Err(DihedralError::TooSmall(n));
        }
        Ok(CycleGraph { n })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `(i, i + 1 mod n)` for every edge index `i`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.n).map(|i| (i, (i + 1) % self.n)).collect()
    }

    /// Number of edges joining `u` and `v`.
    pub fn edge_multiplicity(&self, u: usize, v: usize) -> usize {
        self.edges()
            .into_iter()
            .filter(|&(a, b)| (a, b) == (u, v) || (a, b) == (v, u))
            .count()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges()
            .into_iter()
            .map(|(a, b)| usize::from(a == v) + usize::from(b == v))
            .sum()
    }

    /// All `2n` symmetries of the cycle.
    pub fn symmetries(&self) -> Vec<DihedralElement> {
        dihedral_elements(self.n)
    }
}

/// The vertex map `v -> rot + v` (or `v -> rot - v` when `refl`), mod `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DihedralElement {
    pub rot: usize,
    pub refl: bool,
}

impl fmt::Display for DihedralElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.refl {
            write!(f, "(rot {}, refl)", self.rot)
        } else {
            write!(f, "(rot {})", self.rot)
        }
    }
}

impl DihedralElement {
    pub const IDENTITY: DihedralElement = DihedralElement { rot: 0, refl: false };

    pub fn rotation(rot: usize) -> Self {
        DihedralElement { rot, refl: false }
    }

    pub fn reflection(rot: usize) -> Self {
        DihedralElement { rot, refl: true }
    }

    fn check(&self, n: usize) -> Result<(), DihedralError> {
        if n < 2 {
            return Err(DihedralError::TooSmall(n));
        }
        if self.rot >= n {
            return Err(DihedralError::ModulusMismatch { rot: self.rot, n });
        }
        Ok(())
    }

    pub fn apply(&self, v: usize, n: usize) -> usize {
        if self.refl {
            (self.rot + n - v % n) % n
        } else {
            (self.rot + v) % n
        }
    }

    /// Image of edge `i` (joining `i` and `i + 1`).
    pub fn apply_edge(&self, e: usize, n: usize) -> usize {
        if self.refl {
            // {i, i+1} -> {r - i, r - i - 1}, which is edge r - i - 1.
            (self.rot + 2 * n - e % n - 1) % n
        } else {
            (self.rot + e) % n
        }
    }

    pub fn inverse(&self, n: usize) -> Self {
        if self.refl {
            *self
        } else {
            DihedralElement::rotation((n - self.rot % n) % n)
        }
    }

    /// The vertex permutation this element induces.
    pub fn permutation(&self, n: usize) -> Vec<usize> {
        (0..n).map(|v| self.apply(v, n)).collect()
    }
}

/// `g` after `h`: the element whose vertex action is `v -> g(h(v))`.
pub fn compose(
    g: DihedralElement,
    h: DihedralElement,
    n: usize,
) -> Result<DihedralElement, DihedralError> {
    g.check(n)?;
    h.check(n)?;
    Ok(compose_unchecked(g, h, n))
}

pub(crate) fn compose_unchecked(g: DihedralElement, h: DihedralElement, n: usize) -> DihedralElement {
    let rot = if g.refl {
        (g.rot + n - h.rot) % n
    } else {
        (g.rot + h.rot) % n
    };
    DihedralElement {
        rot,
        refl: g.refl ^ h.refl,
    }
}

/// `g h g^-1`.
pub fn conjugate(g: DihedralElement, h: DihedralElement, n: usize) -> DihedralElement {
    compose_unchecked(compose_unchecked(g, h, n), g.inverse(n), n)
}

pub fn dihedral_elements(n: usize) -> Vec<DihedralElement> {
    let mut out: Vec<DihedralElement> = (0..n).map(DihedralElement::rotation).collect();
    out.extend((0..n).map(DihedralElement::reflection));
    out
}

/// The dihedral element acting on an `n`-cycle as the vertex permutation `perm`
/// and, when given, as `edge_perm` on edges. Edges are only needed for
/// `n = 2`, where the vertex permutation alone is ambiguous.
pub fn from_permutation(
    perm: &[usize],
    edge_perm: Option<&[usize]>,
) -> Option<DihedralElement> {
    let n = perm.len();
    dihedral_elements(n).into_iter().find(|g| {
        (0..n).all(|v| g.apply(v, n) == perm[v])
            && edge_perm.is_none_or(|ep| (0..n).all(|e| g.apply_edge(e, n) == ep[e]))
    })
}

/// `+1` for rotations and `-1` for reflections.
pub fn sign_character(g: DihedralElement) -> i8 {
    if g.refl {
        -1
    } else {
        1
    }
}

/// The isomorphism from the abstract dihedral group `<tau, sigma>` onto the
/// symmetries of a labelled cycle fixed by a choice of neighbouring vertices
/// `v0, v1`: `tau` goes to the rotation taking `v0` to `v1`, `sigma` to the
/// reflection fixing `v0`.
///
/// Abstract elements use the standard labelling, i.e. the one for `(0, 1)`:
/// `tau = (rot 1)`, `sigma = (rot 0, refl)`. The general map is conjugation by
/// the unique symmetry sending `0 -> v0` and `1 -> v1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DihedralIso {
    n: usize,
    frame: DihedralElement,
}

impl DihedralIso {
    pub fn tau(&self) -> DihedralElement {
        self.apply(DihedralElement::rotation(1 % self.n))
    }

    pub fn sigma(&self) -> DihedralElement {
        self.apply(DihedralElement::reflection(0))
    }

    /// Abstract element to cycle symmetry.
    pub fn apply(&self, abstract_el: DihedralElement) -> DihedralElement {
        conjugate(self.frame, abstract_el, self.n)
    }

    /// Cycle symmetry back to the abstract element.
    pub fn invert(&self, concrete: DihedralElement) -> DihedralElement {
        conjugate(self.frame.inverse(self.n), concrete, self.n)
    }

    pub fn frame(&self) -> DihedralElement {
        self.frame
    }
}

pub fn dihedral_iso_from_pair(v0: usize, v1: usize, n: usize) -> Result<DihedralIso, DihedralError> {
    if n < 2 {
        return Err(DihedralError::TooSmall(n));
    }
    if v0 >= n || v1 >= n || (v1 != (v0 + 1) % n && v0 != (v1 + 1) % n) {
        return Err(DihedralError::NotNeighbours { v0, v1, n });
    }
    let frame = if v1 == (v0 + 1) % n {
        DihedralElement::rotation(v0)
    } else {
        // v -> v0 - v sends 0 -> v0 and 1 -> v0 - 1 = v1.
        DihedralElement::reflection(v0)
    };
    Ok(DihedralIso { n, frame })
}

/// A finite group acting on an `n`-cycle through dihedral symmetries.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleAction {
    pub n: usize,
    pub group: FiniteGroup,
    pub images: Vec<DihedralElement>,
}

impl CycleAction {
    pub fn trivial(n: usize) -> Self {
        CycleAction {
            n,
            group: FiniteGroup::trivial(),
            images: vec![DihedralElement::IDENTITY],
        }
    }

    /// `Z/2` acting through a single involution.
    pub fn involution(n: usize, g: DihedralElement) -> Self {
        CycleAction {
            n,
            group: FiniteGroup::cyclic(2),
            images: vec![DihedralElement::IDENTITY, g],
        }
    }

    /// `Z/m` acting through the powers of `g`.
    pub fn cyclic_generated_by(n: usize, m: usize, g: DihedralElement) -> Self {
        let mut images = Vec::with_capacity(m);
        let mut acc = DihedralElement::IDENTITY;
        for _ in 0..m {
            images.push(acc);
            acc = compose_unchecked(g, acc, n);
        }
        CycleAction {
            n,
            group: FiniteGroup::cyclic(m),
            images,
        }
    }

    pub fn validate(&self) -> Result<(), ActionError> {
        CycleGraph::new(self.n)?;
        self.group.validate()?;
        if self.images.len() != self.group.order {
            return Err(ActionError::WrongImageCount {
                images: self.images.len(),
                order: self.group.order,
            });
        }
        for g in &self.images {
            g.check(self.n)?;
        }
        if self.images[0] != DihedralElement::IDENTITY {
            return Err(ActionError::IdentityNotFixed(self.images[0]));
        }
        for a in 0..self.group.order {
            for b in 0..self.group.order {
                let got = self.images[self.group.mul(a, b)];
                let want = compose_unchecked(self.images[a], self.images[b], self.n);
                if got != want {
                    return Err(ActionError::NotHomomorphism { a, b, got, want });
                }
            }
        }
        Ok(())
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    /// The same action seen after relabelling the cycle by `g`.
    pub fn relabel(&self, g: DihedralElement) -> CycleAction {
        CycleAction {
            n: self.n,
            group: self.group.clone(),
            images: self.images.iter().map(|&h| conjugate(g, h, self.n)).collect(),
        }
    }

    /// Orbit of a vertex under the action.
    pub fn vertex_orbit(&self, v: usize) -> Vec<usize> {
        let mut orbit: Vec<usize> = self.images.iter().map(|g| g.apply(v, self.n)).collect();
        orbit.sort_unstable();
        orbit.dedup();
        orbit
    }

    pub fn edge_orbit(&self, e: usize) -> Vec<usize> {
        let mut orbit: Vec<usize> = self.images.iter().map(|g| g.apply_edge(e, self.n)).collect();
        orbit.sort_unstable();
        orbit.dedup();
        orbit
    }

    /// Every homomorphism from `group` into the symmetries of the `n`-cycle.
    pub fn all_actions(group: &FiniteGroup, n: usize) -> Vec<CycleAction> {
        let target = FiniteGroup::dihedral(n);
        let decode = |e: usize| DihedralElement {
            rot: e % n,
            refl: e >= n,
        };
        group
            .homomorphisms_to(&target)
            .into_iter()
            .map(|hom| CycleAction {
                n,
                group: group.clone(),
                images: hom.into_iter().map(decode).collect(),
            })
            .collect()
    }
}
