//! Log K3 surfaces of Picard rank zero: boundary cycle combinatorics,
//! dihedral cocycle classes, explicit integral point searches, Pell-type
//! point construction and Brauer-Manin evaluation.

pub mod arith;
pub mod brauer;
pub mod charclass;
pub mod classify;
pub mod dihedral;
pub mod exact;
pub mod group;
pub mod logk3;
pub mod pell;
pub mod petersen;
pub mod points;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error(transparent)]
    Group(#[from] group::GroupError),
    #[error(transparent)]
    Dihedral(#[from] dihedral::DihedralError),
    #[error(transparent)]
    Action(#[from] dihedral::ActionError),
    #[error(transparent)]
    LogK3(#[from] logk3::LogK3Error),
    #[error(transparent)]
    Petersen(#[from] petersen::PetersenError),
    #[error(transparent)]
    CharClass(#[from] charclass::CharClassError),
    #[error(transparent)]
    Points(#[from] points::PointsError),
    #[error(transparent)]
    Pell(#[from] pell::PellError),
    #[error(transparent)]
    Brauer(#[from] brauer::BrauerError),
}

impl Error {
    /// True when an internal certificate failed, as opposed to bad input.
    pub fn is_certification_failure(&self) -> bool {
        matches!(
            self,
            Error::Points(points::PointsError::OffFamily(_))
                | Error::Pell(pell::PellError::Verification(_))
                | Error::Brauer(brauer::BrauerError::CertificationFailed(_))
        )
    }
}
