//! Variational free energy of a belief update, reported in all three of its
//! standard forms:
//!
//! ```text
//! F = KL[Q(s) || P(s|o)] - ln P(o)          (posterior approximation - log evidence)
//!   = -E_Q[ln P(o, s)] - H[Q(s)]            (energy - entropy)
//!   = KL[Q(s) || P(s)] - E_Q[ln P(o|s)]     (complexity - accuracy)
//! ```
//!
//! Sums run over the joint (agent, object) state space with `Q` and `P` both
//! taken as products of their per-factor marginals. Logarithms of model
//! probabilities are floored at [`LOG_FLOOR`](crate::categorical::LOG_FLOOR)
//! the same way in every form, so the three totals agree to rounding.

use serde::{Deserialize, Serialize};

use crate::categorical::safe_ln;
use crate::error::Result;
use crate::inference::evidence;
use crate::model::{BeliefState, GenerativeModel, Observation};

/// All quantities in nats.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FreeEnergyReport {
    /// Complexity minus accuracy.
    pub total: f64,
    /// KL to the exact posterior minus log evidence.
    pub kl_posterior_form: f64,
    pub energy: f64,
    pub entropy: f64,
    pub complexity: f64,
    pub accuracy: f64,
}

impl FreeEnergyReport {
    pub fn energy_form(&self) -> f64 {
        self.energy - self.entropy
    }
}

pub fn variational_free_energy(
    model: &GenerativeModel,
    prior: &BeliefState,
    posterior: &BeliefState,
    observation: Observation,
) -> Result<FreeEnergyReport> {
    model.check_belief(prior)?;
    model.check_belief(posterior)?;
    let log_evidence = safe_ln(evidence(model, prior, observation)?);

    let mut energy = 0.0;
    let mut neg_entropy = 0.0;
    let mut complexity = 0.0;
    let mut accuracy = 0.0;
    let mut kl_exact = 0.0;
    for (i, qa) in posterior.agent.probs().iter().enumerate() {
        if *qa == 0.0 {
            continue;
        }
        let ln_prior_agent = safe_ln(prior.agent.get(i));
        let ln_loc = safe_ln(model.location_likelihood(observation.location, i));
        for (j, qo) in posterior.object.probs().iter().enumerate() {
            let q = qa * qo;
            if q == 0.0 {
                continue;
            }
            let ln_q = q.ln();
            let ln_prior = ln_prior_agent + safe_ln(prior.object.get(j));
            let ln_lik =
                ln_loc + safe_ln(model.visibility_likelihood(observation.visibility, i, j));
            let ln_joint = ln_lik + ln_prior;
            energy -= q * ln_joint;
            neg_entropy += q * ln_q;
            complexity += q * (ln_q - ln_prior);
            accuracy += q * ln_lik;
            kl_exact += q * (ln_q - (ln_joint - log_evidence));
        }
    }

    Ok(FreeEnergyReport {
        total: complexity - accuracy,
        kl_posterior_form: kl_exact - log_evidence,
        energy,
        entropy: -neg_entropy,
        complexity,
        accuracy,
    })
}
