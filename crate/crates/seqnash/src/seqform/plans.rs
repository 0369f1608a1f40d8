//! Realization plans and mixed-strategy profiles.

use super::SequenceFormGame;
use crate::error::{Error, Result};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Flow-conservation tolerance used by plan validation.
pub const FLOW_TOL: f64 = 1e-9;

/// Per-player realization plans, indexed by `W^i` (entry 0 is the empty
/// sequence and equals 1). The chance plan is fixed and lives in the game.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealizationProfile {
    pub plans: Vec<Vec<f64>>,
}

impl RealizationProfile {
    /// Uniform behavior: at each infoset the parent mass splits equally.
    pub fn uniform(sf: &SequenceFormGame) -> Self {
        let mut plans = Vec::with_capacity(sf.num_players());
        for p in sf.players() {
            let mut plan = vec![0.0; p.n_seqs];
            plan[0] = 1.0;
            for is in &p.infosets {
                let share = plan[is.parent_seq] / is.child_seqs.len() as f64;
                for &c in &is.child_seqs {
                    plan[c] = share;
                }
            }
            plans.push(plan);
        }
        RealizationProfile { plans }
    }

    /// Seeded strictly-positive random plan: behavior weights are drawn
    /// uniformly from [0.1, 1) at every infoset and normalized.
    pub fn random_interior(sf: &SequenceFormGame, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut plans = Vec::with_capacity(sf.num_players());
        for p in sf.players() {
            let mut plan = vec![0.0; p.n_seqs];
            plan[0] = 1.0;
            for is in &p.infosets {
                let w: Vec<f64> = is.child_seqs.iter().map(|_| rng.gen_range(0.1..1.0)).collect();
                let total: f64 = w.iter().sum();
                for (&c, wi) in is.child_seqs.iter().zip(&w) {
                    plan[c] = plan[is.parent_seq] * wi / total;
                }
            }
            plans.push(plan);
        }
        RealizationProfile { plans }
    }

    /// Validate dimensions, nonnegativity, the unit empty sequence, and flow
    /// conservation at every infoset.
    pub fn validate(&self, sf: &SequenceFormGame) -> Result<()> {
        if self.plans.len() != sf.num_players() {
            return Err(Error::DimensionMismatch(format!(
                "profile has {} players, game has {}",
                self.plans.len(),
                sf.num_players()
            )));
        }
        for (i, p) in sf.players().iter().enumerate() {
            let plan = &self.plans[i];
            if plan.len() != p.n_seqs {
                return Err(Error::DimensionMismatch(format!(
                    "player {} plan has {} entries, expected {}",
                    i + 1,
                    plan.len(),
                    p.n_seqs
                )));
            }
            if (plan[0] - 1.0).abs() > FLOW_TOL {
                return Err(Error::InvalidParameter(format!(
                    "player {} empty sequence has mass {}",
                    i + 1,
                    plan[0]
                )));
            }
            for (w, &v) in plan.iter().enumerate() {
                if v < -FLOW_TOL || !v.is_finite() {
                    return Err(Error::InvalidParameter(format!(
                        "player {} sequence `{}` has mass {}",
                        i + 1,
                        p.seq_label[w],
                        v
                    )));
                }
            }
            for is in &p.infosets {
                let sum: f64 = is.child_seqs.iter().map(|&c| plan[c]).sum();
                if (sum - plan[is.parent_seq]).abs() > FLOW_TOL {
                    return Err(Error::InvalidParameter(format!(
                        "player {} infoset `{}` violates flow conservation ({} vs {})",
                        i + 1,
                        is.id,
                        sum,
                        plan[is.parent_seq]
                    )));
                }
            }
        }
        Ok(())
    }

    /// Panicking variant of [`Self::validate`] for test fixtures.
    pub fn validated(self, sf: &SequenceFormGame) -> Self {
        self.validate(sf).unwrap();
        self
    }

    /// Largest flow-conservation violation over all infosets.
    pub fn flow_drift(&self, sf: &SequenceFormGame) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, p) in sf.players().iter().enumerate() {
            for is in &p.infosets {
                let sum: f64 = is.child_seqs.iter().map(|&c| self.plans[i][c]).sum();
                worst = worst.max((sum - self.plans[i][is.parent_seq]).abs());
            }
        }
        worst
    }

    pub fn is_strictly_positive(&self) -> bool {
        self.plans.iter().flatten().all(|&v| v > 0.0)
    }

    /// Serialize as per-player maps keyed by sequence label (the `verify` input format).
    pub fn to_labelled(&self, sf: &SequenceFormGame) -> Vec<indexmap::IndexMap<String, f64>> {
        self.plans
            .iter()
            .zip(sf.players())
            .map(|(plan, p)| {
                p.seq_label
                    .iter()
                    .cloned()
                    .zip(plan.iter().copied())
                    .collect()
            })
            .collect()
    }

    /// Inverse of [`Self::to_labelled`]; missing sequences default to 0, the
    /// empty sequence defaults to 1.
    pub fn from_labelled(
        sf: &SequenceFormGame,
        maps: &[indexmap::IndexMap<String, f64>],
    ) -> Result<Self> {
        if maps.len() != sf.num_players() {
            return Err(Error::DimensionMismatch(format!(
                "profile has {} players, game has {}",
                maps.len(),
                sf.num_players()
            )));
        }
        let mut plans = Vec::with_capacity(maps.len());
        for (p, map) in sf.players().iter().zip(maps) {
            let mut plan = vec![0.0; p.n_seqs];
            plan[0] = 1.0;
            for (label, &v) in map {
                match p.seq_label.iter().position(|l| l == label) {
                    Some(w) => plan[w] = v,
                    None => {
                        return Err(Error::DimensionMismatch(format!(
                            "unknown sequence label `{label}`"
                        )))
                    }
                }
            }
            plans.push(plan);
        }
        Ok(RealizationProfile { plans })
    }
}

/// Per-player probability vectors over reduced pure strategies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixedProfile {
    pub probs: Vec<Vec<f64>>,
}

/// Tolerance for mixed-strategy probabilities summing to one.
pub const MIXED_SUM_TOL: f64 = 1e-12;

impl MixedProfile {
    pub fn validate(&self, dims: &[usize]) -> Result<()> {
        if self.probs.len() != dims.len() {
            return Err(Error::DimensionMismatch(format!(
                "profile has {} players, expected {}",
                self.probs.len(),
                dims.len()
            )));
        }
        for (i, (pr, &d)) in self.probs.iter().zip(dims).enumerate() {
            if pr.len() != d {
                return Err(Error::DimensionMismatch(format!(
                    "player {} has {} strategies, expected {}",
                    i + 1,
                    pr.len(),
                    d
                )));
            }
            if pr.iter().any(|&v| v < 0.0 || !v.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "player {} mixed strategy has a negative entry",
                    i + 1
                )));
            }
            let sum: f64 = pr.iter().sum();
            if (sum - 1.0).abs() > MIXED_SUM_TOL {
                return Err(Error::InvalidParameter(format!(
                    "player {} mixed strategy sums to {}",
                    i + 1,
                    sum
                )));
            }
        }
        Ok(())
    }

    /// Point mass on one pure strategy profile.
    pub fn pure(dims: &[usize], choice: &[usize]) -> Self {
        let probs = dims
            .iter()
            .zip(choice)
            .map(|(&d, &c)| {
                let mut v = vec![0.0; d];
                v[c] = 1.0;
                v
            })
            .collect();
        MixedProfile { probs }
    }

    /// Seeded random point of the product simplex (Dirichlet-like via
    /// normalized uniforms).
    pub fn random(dims: &[usize], seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let probs = dims
            .iter()
            .map(|&d| {
                let w: Vec<f64> = (0..d).map(|_| rng.gen_range(0.01..1.0)).collect();
                let s: f64 = w.iter().sum();
                w.into_iter().map(|x| x / s).collect()
            })
            .collect();
        MixedProfile { probs }
    }
}

#[cfg(test)]
mod tests {
    use super::super::testutil::*;
    use super::*;

    #[test]
    fn uniform_plan_is_valid_and_interior() {
        let sf = fig1();
        let u = RealizationProfile::uniform(&sf);
        u.validate(&sf).unwrap();
        assert!(u.is_strictly_positive());
        // Root infoset splits 1/2, nested infoset splits the 1/2 again.
        assert_eq!(u.plans[0], vec![1.0, 0.5, 0.5, 0.25, 0.25]);
    }

    #[test]
    fn random_interior_is_seed_deterministic() {
        let sf = fig2();
        let a = RealizationProfile::random_interior(&sf, 7);
        let b = RealizationProfile::random_interior(&sf, 7);
        let c = RealizationProfile::random_interior(&sf, 8);
        assert_eq!(a, b);
        assert_ne!(a, c);
        a.validate(&sf).unwrap();
        assert!(a.is_strictly_positive());
    }

    #[test]
    fn labelled_round_trip() {
        let sf = fig1();
        let plan = RealizationProfile::random_interior(&sf, 3);
        let maps = plan.to_labelled(&sf);
        let back = RealizationProfile::from_labelled(&sf, &maps).unwrap();
        assert_eq!(plan, back);
    }

    #[test]
    fn validation_catches_flow_violation() {
        let sf = fig1();
        let mut bad = RealizationProfile::uniform(&sf);
        bad.plans[0][1] = 0.9;
        assert!(bad.validate(&sf).is_err());
    }
}
