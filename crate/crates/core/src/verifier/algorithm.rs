//! Counterexample search for the algorithmic strategy. The strategy is a
//! function of its input, so enumerating inputs covers every behaviour.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::engine::{replay, solve, SolveOptions, SolveTrace};
use crate::model::{ConfigurationState, ElementCounts};
use crate::strategies::Strategy;

use super::{PropertySpec, Scope, VerifierError, Witness};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub input: ElementCounts,
    pub trace: SolveTrace,
    pub witnesses: Vec<Witness>,
}

impl Counterexample {
    /// Replays the trace and re-evaluates `property` on its final state.
    pub fn reproduce(&self, property: &PropertySpec) -> Result<Vec<Witness>, VerifierError> {
        let end = replay(&self.trace.initial, &self.trace.action_kinds())?;
        Ok(property.check(&end))
    }
}

/// Solves one input with the algorithmic strategy and checks `property` on
/// the result. `Ok(None)` means the property holds.
pub fn run_input(
    input: ElementCounts,
    property: &PropertySpec,
    max_steps: u32,
) -> Result<Option<Counterexample>, VerifierError> {
    let initial = ConfigurationState::with_elements(&input);
    let opts = SolveOptions { max_steps, ..Default::default() };
    let trace = solve(&initial, Strategy::Algorithmic, &opts)?;
    if !trace.is_solved() {
        return Err(VerifierError::ScopeExhaustedUnsolved(input));
    }
    let witnesses = property.check(trace.final_state());
    if witnesses.is_empty() {
        Ok(None)
    } else {
        Ok(Some(Counterexample { input, trace, witnesses }))
    }
}

/// Checks every input within `scope` in lexicographic order of element
/// counts and returns the first counterexample. Inputs are checked in
/// parallel; the result is the same as a sequential run.
pub fn check_algorithm(
    property: &PropertySpec,
    scope: &Scope,
) -> Result<Option<Counterexample>, VerifierError> {
    let inputs: Vec<ElementCounts> = ElementCounts::enumerate(scope.max_per_element_type).collect();
    let first = inputs.into_par_iter().find_map_first(|input| {
        match run_input(input, property, scope.max_steps) {
            Ok(None) => None,
            Ok(Some(cx)) => Some(Ok(cx)),
            Err(e) => Some(Err(e)),
        }
    });
    first.transpose()
}
