//! Payoff evaluation and best responses on realization plans.

use super::{PlayerSeqs, RealizationProfile, SequenceFormGame};
use crate::error::{Error, Result};

/// `g^i(w, gamma^{-i})` for every sequence `w` of every player, evaluated on
/// raw per-player plan slices (entry 0 must be 1). Chance contributes through
/// the fixed chance plan. One pass over the sparse payoff table.
pub fn payoff_vectors_all(sf: &SequenceFormGame, plans: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = sf.num_players();
    let mut out: Vec<Vec<f64>> = sf.players().iter().map(|p| vec![0.0; p.n_seqs]).collect();
    for e in sf.entries() {
        for i in 0..n {
            let mut coef = e.payoffs[i] * e.chance_weight;
            if coef == 0.0 {
                continue;
            }
            for q in 0..n {
                if q != i {
                    coef *= plans[q][e.seqs[q]];
                }
            }
            out[i][e.seqs[i]] += coef;
        }
    }
    out
}

/// `g^i(w, gamma^{-i})` over `w in W^i` for one player.
pub fn payoff_vector(
    sf: &SequenceFormGame,
    player: usize,
    gamma: &RealizationProfile,
) -> Result<Vec<f64>> {
    if gamma.plans.len() != sf.num_players() {
        return Err(Error::DimensionMismatch(format!(
            "profile has {} players, game has {}",
            gamma.plans.len(),
            sf.num_players()
        )));
    }
    let n = sf.num_players();
    let mut out = vec![0.0; sf.player(player).n_seqs];
    for e in sf.entries() {
        let mut coef = e.payoffs[player] * e.chance_weight;
        for q in 0..n {
            if q != player {
                coef *= gamma.plans[q][e.seqs[q]];
            }
        }
        out[e.seqs[player]] += coef;
    }
    Ok(out)
}

/// Expected payoff `g^i(gamma)` for every player.
pub fn expected_payoffs(sf: &SequenceFormGame, gamma: &RealizationProfile) -> Vec<f64> {
    let n = sf.num_players();
    let mut out = vec![0.0; n];
    for e in sf.entries() {
        let mut prob = e.chance_weight;
        for q in 0..n {
            prob *= gamma.plans[q][e.seqs[q]];
        }
        if prob != 0.0 {
            for i in 0..n {
                out[i] += prob * e.payoffs[i];
            }
        }
    }
    out
}

/// Backward-DP values for one player against fixed opponents.
///
/// `seq_value[w]` is the best payoff collectible from sequence `w` onward when
/// `w` is played with probability one (own-terminal contribution plus the best
/// continuation at every child infoset); `infoset_best[j]` is the maximum of
/// `seq_value` over the infoset's actions.
#[derive(Debug, Clone)]
pub struct BestResponse {
    pub direct: Vec<f64>,
    pub seq_value: Vec<f64>,
    pub infoset_best: Vec<f64>,
}

/// Compute the best-response DP for `player` against `gamma^{-i}`.
pub fn best_response_values(
    sf: &SequenceFormGame,
    player: usize,
    gamma: &RealizationProfile,
) -> Result<BestResponse> {
    let direct = payoff_vector(sf, player, gamma)?;
    Ok(best_response_from_direct(sf.player(player), &direct))
}

pub(crate) fn best_response_from_direct(p: &PlayerSeqs, direct: &[f64]) -> BestResponse {
    let mut seq_value = direct.to_vec();
    let mut infoset_best = vec![0.0; p.infosets.len()];
    // Child sequences always carry larger indices than their parent, so a
    // single descending sweep resolves the recursion.
    for w in (0..p.n_seqs).rev() {
        for &j in &p.next_infosets[w] {
            let best = p.infosets[j]
                .child_seqs
                .iter()
                .map(|&c| seq_value[c])
                .fold(f64::NEG_INFINITY, f64::max);
            infoset_best[j] = best;
            seq_value[w] += best;
        }
    }
    BestResponse {
        direct: direct.to_vec(),
        seq_value,
        infoset_best,
    }
}

/// Maximal expected payoff attainable while committing to sequence `w`:
/// the unconstrained optimum minus the one-step losses forced along `w`'s path.
pub fn best_response_value(
    sf: &SequenceFormGame,
    player: usize,
    seq: usize,
    gamma: &RealizationProfile,
) -> Result<f64> {
    let br = best_response_values(sf, player, gamma)?;
    let p = sf.player(player);
    let mut value = br.seq_value[0];
    let mut w = seq;
    while let Some((j, _)) = p.seq_source[w] {
        value -= br.infoset_best[j] - br.seq_value[w];
        w = p.infosets[j].parent_seq;
    }
    Ok(value)
}

/// Per-player gaps `g^i_m(empty, gamma^{-i}) - g^i(gamma)` and the maximum.
#[derive(Debug, Clone)]
pub struct GapReport {
    pub per_player: Vec<f64>,
    pub max_gap: f64,
}

/// The profile is an epsilon-equilibrium iff `max_gap <= epsilon`.
pub fn epsilon_gap(sf: &SequenceFormGame, gamma: &RealizationProfile) -> Result<GapReport> {
    let achieved = expected_payoffs(sf, gamma);
    let mut per_player = Vec::with_capacity(sf.num_players());
    for i in 0..sf.num_players() {
        let br = best_response_values(sf, i, gamma)?;
        per_player.push(br.seq_value[0] - achieved[i]);
    }
    let max_gap = per_player.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(GapReport {
        per_player,
        max_gap,
    })
}

#[cfg(test)]
mod tests {
    use super::super::testutil::*;
    use super::super::{mixed_to_realization, MixedProfile};
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn type_b_payoffs_match_example() {
        let sf = fig1();
        let gamma = fig1_type_b(&sf);
        let u = expected_payoffs(&sf, &gamma);
        assert_abs_diff_eq!(u[0], 4.0, epsilon = 1e-12);
        assert_abs_diff_eq!(u[1], 7.0 / 3.0, epsilon = 1e-12);
    }

    #[test]
    fn point_mass_plans_select_one_terminal() {
        let sf = fig1();
        // Player 1 plays L, player 2 plays a and d: terminal <L,a> = (11, 3).
        let gamma = RealizationProfile {
            plans: vec![
                vec![1.0, 1.0, 0.0, 0.0, 0.0],
                vec![1.0, 1.0, 0.0, 1.0, 0.0],
            ],
        }
        .validated(&sf);
        let u = expected_payoffs(&sf, &gamma);
        assert_eq!(u, vec![11.0, 3.0]);
    }

    #[test]
    fn payoff_vector_entry_for_l_against_a() {
        let sf = fig1();
        let gamma = RealizationProfile {
            plans: vec![
                vec![1.0, 0.5, 0.5, 0.25, 0.25],
                vec![1.0, 1.0, 0.0, 1.0, 0.0],
            ],
        }
        .validated(&sf);
        let v = payoff_vector(&sf, 0, &gamma).unwrap();
        // Sequence index 1 = I11:L, against gamma^2 with a = 1: payoff 11.
        assert_abs_diff_eq!(v[1], 11.0, epsilon = 1e-12);
    }

    #[test]
    fn best_response_against_type_b_is_four() {
        let sf = fig1();
        let gamma = fig1_type_b(&sf);
        let v = best_response_value(&sf, 0, 0, &gamma).unwrap();
        assert_abs_diff_eq!(v, 4.0, epsilon = 1e-12);
    }

    #[test]
    fn best_response_against_type_a_is_eleven() {
        let sf = fig1();
        // Type A opponent: a = 1, d = 1.
        let gamma = RealizationProfile {
            plans: vec![
                vec![1.0, 0.5, 0.5, 0.25, 0.25],
                vec![1.0, 1.0, 0.0, 1.0, 0.0],
            ],
        }
        .validated(&sf);
        let v = best_response_value(&sf, 0, 0, &gamma).unwrap();
        assert_abs_diff_eq!(v, 11.0, epsilon = 1e-12);
    }

    #[test]
    fn committed_best_response_values() {
        let sf = fig1();
        let gamma = fig1_type_b(&sf);
        // Committing to L against Type B: direct(L) = 3 (entry b pays 3).
        let v_l = best_response_value(&sf, 0, 1, &gamma).unwrap();
        assert_abs_diff_eq!(v_l, 3.0, epsilon = 1e-12);
        // Committing to R keeps the optimum.
        let v_r = best_response_value(&sf, 0, 2, &gamma).unwrap();
        assert_abs_diff_eq!(v_r, 4.0, epsilon = 1e-12);
    }

    #[test]
    fn single_decision_game_best_response_is_max_payoff() {
        let g = crate::game::parse_game(
            r#"{"players":1,
                "infosets":[{"id":"I","owner":1,"actions":["x","y","z"]}],
                "root":{"kind":"decision","infoset":"I","children":{
                    "x":{"kind":"terminal","payoffs":[1]},
                    "y":{"kind":"terminal","payoffs":[5]},
                    "z":{"kind":"terminal","payoffs":[-2]}}}}"#,
        )
        .unwrap();
        let sf = crate::seqform::build_sequence_form(&g).unwrap();
        let gamma = RealizationProfile::uniform(&sf);
        assert_eq!(best_response_value(&sf, 0, 0, &gamma).unwrap(), 5.0);
    }

    #[test]
    fn type_b_gap_is_zero() {
        let sf = fig1();
        let gamma = fig1_type_b(&sf);
        let gap = epsilon_gap(&sf, &gamma).unwrap();
        assert!(gap.max_gap.abs() <= 1e-12, "gap = {}", gap.max_gap);
    }

    #[test]
    fn type_c_gap_is_zero_after_eq1_mapping() {
        let sf = fig1();
        let sigma = MixedProfile {
            probs: vec![
                vec![5.0 / 14.0, 3.0 / 14.0, 3.0 / 7.0],
                vec![1.0 / 12.0, 1.0 / 24.0, 7.0 / 12.0, 7.0 / 24.0],
            ],
        };
        let gamma = mixed_to_realization(&sf, &sigma).unwrap();
        let gap = epsilon_gap(&sf, &gamma).unwrap();
        assert!(gap.max_gap.abs() <= 1e-12, "gap = {}", gap.max_gap);
    }

    #[test]
    fn uniform_behavior_has_positive_gap() {
        let sf = fig1();
        let gamma = RealizationProfile::uniform(&sf);
        let gap = epsilon_gap(&sf, &gamma).unwrap();
        assert!(gap.max_gap > 1e-3, "gap = {}", gap.max_gap);
        // Gaps are never meaningfully negative.
        assert!(gap.per_player.iter().all(|&g| g >= -1e-12));
    }
}
