//! The classification pipeline: reduce to degree 5, read off the cocycle
//! class, push it through the sign character and pick a model.

use crate::charclass::{class_from_action, model_from_class, sign_pushforward, CocycleClass, ModelDescriptor};
use crate::dihedral::CycleAction;
use crate::logk3::{reduce_to_degree5, LogK3Structure, Rewrite, SelfIntersectionSeq};
use crate::Error;
use serde::{Deserialize, Serialize};

fn yes() -> bool {
    true
}

/// A structure as read from JSON. A missing action means the split case.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifyInput {
    pub degree: i64,
    pub seq: SelfIntersectionSeq,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action: Option<CycleAction>,
    #[serde(default = "yes")]
    pub ample: bool,
    /// Square-free `a` with splitting field `Q(sqrt a)`, needed for quadratic
    /// classes.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<i64>,
}

impl ClassifyInput {
    pub fn structure(&self) -> Result<LogK3Structure, Error> {
        let action = self
            .action
            .clone()
            .unwrap_or_else(|| CycleAction::trivial(self.seq.len()));
        Ok(LogK3Structure::new(self.degree, self.seq.clone(), action, self.ample)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub class: CocycleClass,
    /// Sign character of the class, one entry per group element.
    pub character: Vec<i8>,
    pub model: ModelDescriptor,
    pub trace: Vec<Rewrite>,
    pub reduced: LogK3Structure,
}

pub fn classify(s: &LogK3Structure, a: Option<i64>) -> Result<Classification, Error> {
    let (reduced, trace) = reduce_to_degree5(s)?;
    let class = class_from_action(&reduced.action)?;
    let character = sign_pushforward(&class);
    let model = model_from_class(&class, a)?;
    Ok(Classification {
        class,
        character,
        model,
        trace,
        reduced,
    })
}

pub fn classify_input(input: &ClassifyInput) -> Result<Classification, Error> {
    classify(&input.structure()?, input.a)
}
