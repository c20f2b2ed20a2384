//! The characteristic class of a Galois action on the degree 5 boundary
//! cycle: a homomorphism into `D5` up to conjugation, its sign character, and
//! the explicit surface model when one is known.

use crate::arith::is_square_free;
use crate::dihedral::{
    conjugate, dihedral_elements, dihedral_iso_from_pair, sign_character,
    ActionError, CycleAction, DihedralElement, DihedralError,
};
use crate::group::{FiniteGroup, GroupError};
use crate::points::SurfaceModel;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use thiserror::Error;

const N: usize = 5;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CharClassError {
    #[error("characteristic classes need a 5-cycle, got a {0}-cycle")]
    NotFiveCycle(usize),
    #[error(transparent)]
    Action(#[from] ActionError),
    #[error(transparent)]
    Dihedral(#[from] DihedralError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("representative has {got} images for a group of order {order}")]
    WrongLength { got: usize, order: usize },
    #[error("a quadratic class needs the square-free integer a of its splitting field")]
    MissingA,
    #[error("a = {0} is not square-free")]
    NotSquareFree(i64),
    #[error("a = {0} is a square, which splits the nontrivial character")]
    SquareA(i64),
}

/// A homomorphism `G -> D5`, stored as the conjugate with the least image
/// tuple.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CocycleClass {
    pub group: FiniteGroup,
    pub rep: Vec<DihedralElement>,
}

impl CocycleClass {
    /// Canonicalizes `rep`, which must be a homomorphism from `group`.
    pub fn new(group: FiniteGroup, rep: Vec<DihedralElement>) -> Result<Self, CharClassError> {
        if rep.len() != group.order {
            return Err(CharClassError::WrongLength {
                got: rep.len(),
                order: group.order,
            });
        }
        CycleAction {
            n: N,
            group: group.clone(),
            images: rep.clone(),
        }
        .validate()?;
        Ok(CocycleClass {
            rep: canonical_rep(&rep),
            group,
        })
    }

    pub fn is_trivial(&self) -> bool {
        self.rep.iter().all(|g| *g == DihedralElement::IDENTITY)
    }

    pub fn image(&self) -> BTreeSet<DihedralElement> {
        self.rep.iter().copied().collect()
    }

    /// Order of the image subgroup, which is 1, 2, 5 or 10.
    pub fn image_order(&self) -> usize {
        self.image().len()
    }
}

fn conjugate_rep(h: DihedralElement, rep: &[DihedralElement]) -> Vec<DihedralElement> {
    rep.iter().map(|&g| conjugate(h, g, N)).collect()
}

fn canonical_rep(rep: &[DihedralElement]) -> Vec<DihedralElement> {
    dihedral_elements(N)
        .into_iter()
        .map(|h| conjugate_rep(h, rep))
        .min()
        .expect("D5 is nonempty")
}

/// Read `rho` through the identification of the cycle with the standard
/// pentagon that sends 0 to `v0` and 1 to `v1`, then take its class.
pub fn class_from_action_with_pair(
    rho: &CycleAction,
    v0: usize,
    v1: usize,
) -> Result<CocycleClass, CharClassError> {
    if rho.n != N {
        return Err(CharClassError::NotFiveCycle(rho.n));
    }
    rho.validate()?;
    let iso = dihedral_iso_from_pair(v0, v1, N)?;
    let rep: Vec<DihedralElement> = rho.images.iter().map(|&g| iso.invert(g)).collect();
    Ok(CocycleClass {
        group: rho.group.clone(),
        rep: canonical_rep(&rep),
    })
}

pub fn class_from_action(rho: &CycleAction) -> Result<CocycleClass, CharClassError> {
    class_from_action_with_pair(rho, 0, 1)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct H1Entry {
    pub class: CocycleClass,
    /// Number of homomorphisms conjugate to the representative.
    pub orbit_size: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct H1Report {
    pub group_order: usize,
    pub hom_count: usize,
    pub class_count: usize,
    pub classes: Vec<H1Entry>,
}

fn decode(e: usize) -> DihedralElement {
    if e < N {
        DihedralElement::rotation(e)
    } else {
        DihedralElement::reflection(e - N)
    }
}

/// All homomorphisms `G -> D5`, grouped into conjugacy classes.
pub fn h1_enumerate(group: &FiniteGroup) -> Result<H1Report, CharClassError> {
    group.validate()?;
    let homs: Vec<Vec<DihedralElement>> = group
        .homomorphisms_to(&FiniteGroup::dihedral(N))
        .into_iter()
        .map(|h| h.into_iter().map(decode).collect())
        .collect();
    let mut seen = BTreeSet::new();
    let mut classes = Vec::new();
    for hom in &homs {
        if seen.contains(hom) {
            continue;
        }
        let orbit: BTreeSet<Vec<DihedralElement>> = dihedral_elements(N)
            .into_iter()
            .map(|h| conjugate_rep(h, hom))
            .collect();
        let rep = orbit.iter().next().expect("orbit contains hom").clone();
        classes.push(H1Entry {
            class: CocycleClass {
                group: group.clone(),
                rep,
            },
            orbit_size: orbit.len(),
        });
        seen.extend(orbit);
    }
    classes.sort_by(|a, b| a.class.rep.cmp(&b.class.rep));
    Ok(H1Report {
        group_order: group.order,
        hom_count: homs.len(),
        class_count: classes.len(),
        classes,
    })
}

/// The quadratic character `chi o rep`, as a list of signs indexed by group
/// element.
pub fn sign_pushforward(c: &CocycleClass) -> Vec<i8> {
    c.rep.iter().map(|&g| sign_character(g)).collect()
}

/// Does the class factor through a group of order at most 2?
pub fn is_quadratic(c: &CocycleClass) -> bool {
    c.image_order() <= 2
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    Trivial,
    Quadratic,
    NonExplicit,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelDescriptor {
    pub kind: ModelKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub equation: Option<SurfaceModel>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// The explicit affine model for trivial and quadratic classes. A quadratic
/// class needs the square-free `a` with splitting field `Q(sqrt a)`.
pub fn model_from_class(c: &CocycleClass, a: Option<i64>) -> Result<ModelDescriptor, CharClassError> {
    if c.is_trivial() {
        return Ok(ModelDescriptor {
            kind: ModelKind::Trivial,
            a: None,
            equation: Some(SurfaceModel::trivial()),
            note: None,
        });
    }
    if is_quadratic(c) {
        let a = a.ok_or(CharClassError::MissingA)?;
        if a == 1 {
            return Err(CharClassError::SquareA(a));
        }
        if !is_square_free(a) {
            return Err(CharClassError::NotSquareFree(a));
        }
        return Ok(ModelDescriptor {
            kind: ModelKind::Quadratic,
            a: Some(a),
            equation: Some(SurfaceModel::quadratic(a)),
            note: None,
        });
    }
    Ok(ModelDescriptor {
        kind: ModelKind::NonExplicit,
        a: None,
        equation: None,
        note: Some(format!(
            "image of order {} in D5; such surfaces exist but no explicit equation is known",
            c.image_order()
        )),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_and_reflection_classes() {
        let c = class_from_action(&CycleAction::trivial(5)).unwrap();
        assert!(c.is_trivial());
        assert_eq!(sign_pushforward(&c), vec![1]);
        assert!(is_quadratic(&c));

        // Reflection fixing vertex 3 is v -> 6 - v = 1 - v.
        let refl = DihedralElement::reflection(1);
        assert_eq!(refl.apply(3, 5), 3);
        let c = class_from_action(&CycleAction::involution(5, refl)).unwrap();
        let h1 = h1_enumerate(&FiniteGroup::cyclic(2)).unwrap();
        let nontrivial: Vec<_> = h1.classes.iter().filter(|e| !e.class.is_trivial()).collect();
        assert_eq!(nontrivial.len(), 1);
        assert_eq!(c, nontrivial[0].class);
        assert_eq!(sign_pushforward(&c), vec![1, -1]);
        assert!(is_quadratic(&c));
    }

    #[test]
    fn classes_ignore_relabelling_and_pair() {
        for group in ["Z2", "Z5", "D5", "V4", "Z10"] {
            let g = FiniteGroup::by_name(group).unwrap();
            for rho in CycleAction::all_actions(&g, 5) {
                let base = class_from_action(&rho).unwrap();
                for h in dihedral_elements(5) {
                    assert_eq!(class_from_action(&rho.relabel(h)).unwrap(), base);
                }
                for v0 in 0..5 {
                    for v1 in [(v0 + 1) % 5, (v0 + 4) % 5] {
                        assert_eq!(class_from_action_with_pair(&rho, v0, v1).unwrap(), base);
                    }
                }
                let chi = sign_pushforward(&base);
                let direct: Vec<i8> = rho.images.iter().map(|&g| sign_character(g)).collect();
                assert_eq!(chi, direct);
            }
        }
    }

    #[test]
    fn h1_counts() {
        let count = |name: &str| h1_enumerate(&FiniteGroup::by_name(name).unwrap()).unwrap();
        let z2 = count("Z2");
        assert_eq!((z2.class_count, z2.hom_count), (2, 6));
        let z5 = count("Z5");
        assert_eq!((z5.class_count, z5.hom_count), (3, 5));
        let z3 = count("Z3");
        assert_eq!((z3.class_count, z3.hom_count), (1, 1));
        for r in [z2, z5, z3, count("D5"), count("V4"), count("Z10")] {
            assert_eq!(r.classes.iter().map(|e| e.orbit_size).sum::<usize>(), r.hom_count);
        }
        // Z/5 classes: trivial, {tau, tau^4}, {tau^2, tau^3}.
        let z5 = count("Z5");
        let gens: BTreeSet<usize> = z5.classes.iter().map(|e| e.class.rep[1].rot).collect();
        assert_eq!(gens, [0, 1, 2].into_iter().collect());
        assert!(z5.classes.iter().all(|e| sign_pushforward(&e.class).iter().all(|&s| s == 1)));
        assert!(z5.classes.iter().filter(|e| !e.class.is_trivial()).all(|e| !is_quadratic(&e.class)));
    }

    #[test]
    fn models() {
        let trivial = class_from_action(&CycleAction::trivial(5)).unwrap();
        let m = model_from_class(&trivial, None).unwrap();
        assert_eq!(m.kind, ModelKind::Trivial);
        assert_eq!(m.equation.unwrap().to_string(), "(xy - 1)t = x - 1");

        let quad = class_from_action(&CycleAction::involution(5, DihedralElement::reflection(0))).unwrap();
        let m = model_from_class(&quad, Some(2)).unwrap();
        assert_eq!(m.kind, ModelKind::Quadratic);
        assert_eq!(m.equation.unwrap().to_string(), "(x^2 - 2y^2)t = y - 1");
        assert_eq!(model_from_class(&quad, None), Err(CharClassError::MissingA));
        assert_eq!(model_from_class(&quad, Some(8)), Err(CharClassError::NotSquareFree(8)));
        assert_eq!(model_from_class(&quad, Some(1)), Err(CharClassError::SquareA(1)));

        let z5 = CycleAction::cyclic_generated_by(5, 5, DihedralElement::rotation(1));
        let m = model_from_class(&class_from_action(&z5).unwrap(), Some(2)).unwrap();
        assert_eq!(m.kind, ModelKind::NonExplicit);
        assert!(m.equation.is_none());
    }

    #[test]
    fn json_shapes() {
        let c = class_from_action(&CycleAction::involution(5, DihedralElement::reflection(0))).unwrap();
        let v = serde_json::to_value(&c).unwrap();
        assert_eq!(v["rep"][1]["refl"], true);
        assert!(v["group"].is_object());
        let back: CocycleClass = serde_json::from_value(v).unwrap();
        assert_eq!(back, c);

        let m = model_from_class(&c, Some(5)).unwrap();
        let v = serde_json::to_value(&m).unwrap();
        assert_eq!(v["kind"], "quadratic");
        assert_eq!(v["equation"]["family"], "normform");
        assert_eq!(v["equation"]["coeffs"]["a"], "5");
        let back: ModelDescriptor = serde_json::from_value(v).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(
            class_from_action(&CycleAction::trivial(4)),
            Err(CharClassError::NotFiveCycle(4))
        );
        let bad = CycleAction {
            n: 5,
            group: FiniteGroup::cyclic(2),
            images: vec![DihedralElement::IDENTITY, DihedralElement::rotation(1)],
        };
        assert!(matches!(class_from_action(&bad), Err(CharClassError::Action(_))));
        assert!(CocycleClass::new(FiniteGroup::cyclic(2), vec![DihedralElement::IDENTITY]).is_err());
    }
}
