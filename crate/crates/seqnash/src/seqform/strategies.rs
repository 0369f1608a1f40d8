//! Reduced pure strategies and the mixed-strategy/realization-plan maps.
//!
//! A reduced strategy assigns an action only to infosets reachable under the
//! player's own earlier choices. Enumeration order is deterministic: root
//! infosets nest outermost in canonical order, actions in declared order, and
//! each chosen action is followed by the sub-strategies of the infosets it
//! opens. This order is what the normal-form tables index.

use super::{MixedProfile, PlayerSeqs, RealizationProfile, SequenceFormGame};
use crate::error::{Error, Result};

/// Action choice per infoset; `None` where the infoset is unreachable under
/// the strategy's own earlier choices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedStrategy {
    pub choice: Vec<Option<usize>>,
}

impl ReducedStrategy {
    /// `s^i(w)`: 1 iff every (infoset, action) pair on `w`'s path is chosen.
    pub fn plays_sequence(&self, p: &PlayerSeqs, seq: usize) -> bool {
        let mut w = seq;
        while let Some((j, a)) = p.seq_source[w] {
            if self.choice[j] != Some(a) {
                return false;
            }
            w = p.infosets[j].parent_seq;
        }
        true
    }

    /// Sequences consistent with this strategy (the support of `s^i(.)`).
    pub fn consistent_seqs(&self, p: &PlayerSeqs) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![0usize];
        while let Some(w) = stack.pop() {
            out.push(w);
            for &j in &p.next_infosets[w] {
                if let Some(a) = self.choice[j] {
                    stack.push(p.infosets[j].child_seqs[a]);
                }
            }
        }
        out
    }
}

/// Number of reduced strategies of `player`, without enumerating them.
pub fn count_reduced_strategies(sf: &SequenceFormGame, player: usize) -> u128 {
    let p = sf.player(player);
    // c(w) = product over infosets opened by w of (sum over actions of c(child)).
    let mut c = vec![1u128; p.n_seqs];
    for w in (0..p.n_seqs).rev() {
        for &j in &p.next_infosets[w] {
            let per_set: u128 = p.infosets[j]
                .child_seqs
                .iter()
                .map(|&child| c[child])
                .sum();
            c[w] = c[w].saturating_mul(per_set);
        }
    }
    c[0]
}

/// Enumerate the reduced strategies of `player` in canonical order.
pub fn enumerate_reduced_strategies(sf: &SequenceFormGame, player: usize) -> Vec<ReducedStrategy> {
    let p = sf.player(player);
    let base = ReducedStrategy {
        choice: vec![None; p.infosets.len()],
    };
    let mut out = vec![base];
    extend_over_sets(p, &p.next_infosets[0], &mut out);
    out
}

/// Cartesian-extend every partial strategy in `out` over the given infosets,
/// first infoset outermost (slowest varying).
fn extend_over_sets(p: &PlayerSeqs, sets: &[usize], out: &mut Vec<ReducedStrategy>) {
    for &j in sets {
        let mut next = Vec::new();
        for s in out.iter() {
            for (a, &child) in p.infosets[j].child_seqs.iter().enumerate() {
                let mut sub = vec![ReducedStrategy {
                    choice: {
                        let mut c = s.choice.clone();
                        c[j] = Some(a);
                        c
                    },
                }];
                extend_over_sets(p, &p.next_infosets[child], &mut sub);
                next.extend(sub);
            }
        }
        *out = next;
    }
}

/// Human-readable label: assigned (infoset, action) pairs joined by `+`.
pub fn strategy_label(sf: &SequenceFormGame, player: usize, s: &ReducedStrategy) -> String {
    let p = sf.player(player);
    let parts: Vec<String> = p
        .infosets
        .iter()
        .enumerate()
        .filter_map(|(j, is)| s.choice[j].map(|a| format!("{}:{}", is.id, is.actions[a])))
        .collect();
    if parts.is_empty() {
        super::EMPTY_SEQ_LABEL.to_string()
    } else {
        parts.join("+")
    }
}

/// Map a mixed profile to its realization plan:
/// `gamma^i(w) = sum_s s^i(w) sigma^i(s^i)`.
pub fn mixed_to_realization(
    sf: &SequenceFormGame,
    sigma: &MixedProfile,
) -> Result<RealizationProfile> {
    let mut plans = Vec::with_capacity(sf.num_players());
    for i in 0..sf.num_players() {
        let p = sf.player(i);
        let strategies = enumerate_reduced_strategies(sf, i);
        if sigma.probs[i].len() != strategies.len() {
            return Err(Error::DimensionMismatch(format!(
                "player {} has {} strategies, profile provides {}",
                i + 1,
                strategies.len(),
                sigma.probs[i].len()
            )));
        }
        let mut plan = vec![0.0; p.n_seqs];
        for (s, &prob) in strategies.iter().zip(&sigma.probs[i]) {
            if prob == 0.0 {
                continue;
            }
            for w in s.consistent_seqs(p) {
                plan[w] += prob;
            }
        }
        plans.push(plan);
    }
    Ok(RealizationProfile { plans })
}

/// Map a strictly positive plan to the mixed profile given by the
/// product-of-ratios formula over each strategy's assigned infosets.
pub fn realization_to_mixed(
    sf: &SequenceFormGame,
    gamma: &RealizationProfile,
) -> Result<MixedProfile> {
    for (i, p) in sf.players().iter().enumerate() {
        for (w, &v) in gamma.plans[i].iter().enumerate() {
            if v <= 0.0 {
                return Err(Error::NotInterior {
                    label: format!("player {} {}", i + 1, p.seq_label[w]),
                    value: v,
                });
            }
        }
    }
    let mut probs = Vec::with_capacity(sf.num_players());
    for i in 0..sf.num_players() {
        let p = sf.player(i);
        let strategies = enumerate_reduced_strategies(sf, i);
        let mut v = Vec::with_capacity(strategies.len());
        for s in &strategies {
            let mut prod = 1.0;
            for (j, choice) in s.choice.iter().enumerate() {
                if let Some(a) = choice {
                    let is = &p.infosets[j];
                    prod *= gamma.plans[i][is.child_seqs[*a]] / gamma.plans[i][is.parent_seq];
                }
            }
            v.push(prod);
        }
        probs.push(v);
    }
    Ok(MixedProfile { probs })
}

#[cfg(test)]
mod tests {
    use super::super::testutil::*;
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn fig1_strategy_enumeration_order() {
        let sf = fig1();
        let s1: Vec<String> = enumerate_reduced_strategies(&sf, 0)
            .iter()
            .map(|s| strategy_label(&sf, 0, s))
            .collect();
        assert_eq!(s1, vec!["I11:L", "I11:R+I21:S", "I11:R+I21:T"]);
        let s2: Vec<String> = enumerate_reduced_strategies(&sf, 1)
            .iter()
            .map(|s| strategy_label(&sf, 1, s))
            .collect();
        assert_eq!(
            s2,
            vec!["I12:a+I22:d", "I12:a+I22:f", "I12:b+I22:d", "I12:b+I22:f"]
        );
        assert_eq!(count_reduced_strategies(&sf, 0), 3);
        assert_eq!(count_reduced_strategies(&sf, 1), 4);
    }

    #[test]
    fn eq1_maps_type_b_player1() {
        let sf = fig1();
        let sigma = super::super::MixedProfile {
            probs: vec![
                vec![0.0, 1.0 / 3.0, 2.0 / 3.0],
                vec![0.25; 4],
            ],
        };
        let gamma = mixed_to_realization(&sf, &sigma).unwrap();
        let expect = [1.0, 0.0, 1.0, 1.0 / 3.0, 2.0 / 3.0];
        for (got, want) in gamma.plans[0].iter().zip(expect) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-15);
        }
        // Uniform sigma^2 gives a = b = d = f = 1/2.
        assert_eq!(gamma.plans[1], vec![1.0, 0.5, 0.5, 0.5, 0.5]);
        gamma.validate(&sf).unwrap();
    }

    #[test]
    fn point_mass_maps_to_indicator_plan() {
        let sf = fig1();
        let sigma = super::super::MixedProfile::pure(&[3, 4], &[1, 2]); // {R,S}, {b,d}
        let gamma = mixed_to_realization(&sf, &sigma).unwrap();
        assert_eq!(gamma.plans[0], vec![1.0, 0.0, 1.0, 1.0, 0.0]);
        assert_eq!(gamma.plans[1], vec![1.0, 0.0, 1.0, 1.0, 0.0]);
    }

    #[test]
    fn uniform_behavior_maps_to_reduced_mixed() {
        let sf = fig1();
        let gamma = super::super::RealizationProfile::uniform(&sf);
        let sigma = realization_to_mixed(&sf, &gamma).unwrap();
        // Full strategies would each carry 1/4; reduced {L} absorbs both.
        let expect = [0.5, 0.25, 0.25];
        for (got, want) in sigma.probs[0].iter().zip(expect) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-15);
        }
    }

    #[test]
    fn zero_entry_is_a_domain_error() {
        let sf = fig1();
        let gamma = fig1_type_b(&sf);
        assert!(realization_to_mixed(&sf, &gamma).is_err());
    }

    #[test]
    fn type_c_round_trips_through_mixed() {
        let sf = fig1();
        let sigma = super::super::MixedProfile {
            probs: vec![
                vec![5.0 / 14.0, 3.0 / 14.0, 3.0 / 7.0],
                vec![1.0 / 12.0, 1.0 / 24.0, 7.0 / 12.0, 7.0 / 24.0],
            ],
        };
        let gamma = mixed_to_realization(&sf, &sigma).unwrap();
        assert!(gamma.is_strictly_positive());
        let back = realization_to_mixed(&sf, &gamma).unwrap();
        for (a, b) in sigma.probs.iter().flatten().zip(back.probs.iter().flatten()) {
            assert_abs_diff_eq!(*a, *b, epsilon = 1e-12);
        }
        let gamma2 = mixed_to_realization(&sf, &back).unwrap();
        for (a, b) in gamma.plans.iter().flatten().zip(gamma2.plans.iter().flatten()) {
            assert_abs_diff_eq!(*a, *b, epsilon = 1e-12);
        }
    }
}
