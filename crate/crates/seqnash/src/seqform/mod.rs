//! Sequence-form representation of an extensive-form game.
//!
//! Each player `i` gets an ordered sequence set `W^i` (index 0 is the empty
//! sequence); every other sequence is the extension of an infoset's parent
//! sequence by one action and is identified by that last (infoset, action)
//! pair. The chance player's realization plan is fixed from the chance
//! probabilities. Terminal payoffs live in a sparse table with one entry per
//! terminal history, keyed by the induced sequence profile.
//!
//! All structures are immutable after [`build_sequence_form`]; every
//! evaluation routine is a pure function and safe to call concurrently.

mod duals;
mod eval;
mod plans;
mod strategies;

pub use duals::{dual_bounds, ne_residual, recover_duals, DualBounds, DualCertificate, NeResidual, PlayerBounds};
pub use eval::{
    best_response_value, best_response_values, epsilon_gap, expected_payoffs, payoff_vector,
    payoff_vectors_all, BestResponse, GapReport,
};
pub use plans::{MixedProfile, RealizationProfile};
pub use strategies::{
    count_reduced_strategies, enumerate_reduced_strategies, mixed_to_realization,
    realization_to_mixed, strategy_label, ReducedStrategy,
};

use crate::error::{Error, Result};
use crate::game::{GameTree, NodeKind};

/// Label used for the empty sequence.
pub const EMPTY_SEQ_LABEL: &str = "~";

/// One information set of a player, in sequence-form indexing.
#[derive(Debug, Clone)]
pub struct SeqInfoset {
    /// Infoset id from the game document.
    pub id: String,
    /// Canonical infoset index in the `GameTree`.
    pub tree_infoset: usize,
    /// Index of the parent sequence in the owner's `W^i`.
    pub parent_seq: usize,
    /// Extended sequence index per action, in action order.
    pub child_seqs: Vec<usize>,
    pub actions: Vec<String>,
}

/// Sequence data of one (non-chance) player.
#[derive(Debug, Clone)]
pub struct PlayerSeqs {
    /// `|W^i|`; sequence 0 is the empty sequence.
    pub n_seqs: usize,
    /// `"~"` for the empty sequence, else `"<infoset>:<action>"`.
    pub seq_label: Vec<String>,
    /// For extended sequences, the (infoset index, action index) pair that
    /// created them; `None` for the empty sequence.
    pub seq_source: Vec<Option<(usize, usize)>>,
    /// Infosets in canonical order.
    pub infosets: Vec<SeqInfoset>,
    /// `M_i(w)`: infoset indices whose parent sequence is `w`, per sequence.
    pub next_infosets: Vec<Vec<usize>>,
    /// Whether the extended sequence `(j, a)` lies in `D_i`, i.e. leads to no
    /// further own infoset. `false` for the empty sequence.
    pub in_d: Vec<bool>,
}

impl PlayerSeqs {
    /// Number of extended sequences `(j, a)` (all sequences except the empty one).
    pub fn n_extended(&self) -> usize {
        self.n_seqs - 1
    }

    /// `|D_i|`.
    pub fn d_count(&self) -> usize {
        self.in_d.iter().filter(|&&d| d).count()
    }

    /// Sequence index of `(infoset, action)`.
    pub fn seq_of(&self, infoset: usize, action: usize) -> usize {
        self.infosets[infoset].child_seqs[action]
    }
}

/// The chance player's sequences and fixed realization plan.
#[derive(Debug, Clone)]
pub struct ChanceSeqs {
    pub n_seqs: usize,
    pub seq_label: Vec<String>,
    /// Fixed plan: products of chance probabilities along each sequence.
    pub plan: Vec<f64>,
}

/// One sparse payoff-table entry: a terminal history's induced sequence
/// profile and payoff vector.
#[derive(Debug, Clone)]
pub struct TerminalEntry {
    /// Sequence index per player.
    pub seqs: Vec<usize>,
    /// Chance sequence index.
    pub chance_seq: usize,
    /// `gamma^c` of the chance sequence (cached).
    pub chance_weight: f64,
    /// Raw payoff vector `u_z`.
    pub payoffs: Vec<f64>,
}

/// Sequence-form game: sequence sets, infoset incidence, and the sparse
/// payoff table, with deterministic indexing derived from the game tree.
#[derive(Debug, Clone)]
pub struct SequenceFormGame {
    players: Vec<PlayerSeqs>,
    chance: ChanceSeqs,
    entries: Vec<TerminalEntry>,
}

impl SequenceFormGame {
    pub fn num_players(&self) -> usize {
        self.players.len()
    }

    pub fn player(&self, i: usize) -> &PlayerSeqs {
        &self.players[i]
    }

    pub fn players(&self) -> &[PlayerSeqs] {
        &self.players
    }

    pub fn chance(&self) -> &ChanceSeqs {
        &self.chance
    }

    pub fn entries(&self) -> &[TerminalEntry] {
        &self.entries
    }

    /// `n_0`: total number of extended sequences over all players.
    pub fn n0(&self) -> usize {
        self.players.iter().map(PlayerSeqs::n_extended).sum()
    }

    /// `m_0`: total number of non-chance information sets.
    pub fn m0(&self) -> usize {
        self.players.iter().map(|p| p.infosets.len()).sum()
    }

    /// Length of the homotopy unknown vector `(x, nu, t)`.
    pub fn homotopy_dimension(&self) -> usize {
        self.n0() + self.m0() + 1
    }
}

/// Build the sequence form of a validated game with perfect recall.
pub fn build_sequence_form(g: &GameTree) -> Result<SequenceFormGame> {
    if let Err(v) = g.validate_perfect_recall() {
        return Err(Error::ImperfectRecall(v.to_string()));
    }
    let n = g.players();
    let enumeration = g.enumerate_infosets();

    // Allocate per-player sequence indices: the empty sequence, then one block
    // of |A(I_i^j)| per infoset in canonical order.
    let mut players: Vec<PlayerSeqs> = Vec::with_capacity(n);
    // tree infoset index -> (player, local infoset index)
    let mut local_of_tree: Vec<(usize, usize)> = vec![(usize::MAX, usize::MAX); g.infosets().len()];
    for (i, idxs) in enumeration.per_player.iter().enumerate() {
        let mut seq_label = vec![EMPTY_SEQ_LABEL.to_string()];
        let mut seq_source = vec![None];
        let mut infosets = Vec::with_capacity(idxs.len());
        for (j, &tree_idx) in idxs.iter().enumerate() {
            local_of_tree[tree_idx] = (i, j);
            let is = g.infoset(tree_idx);
            let mut child_seqs = Vec::with_capacity(is.actions.len());
            for (a, label) in is.actions.iter().enumerate() {
                child_seqs.push(seq_label.len());
                seq_label.push(format!("{}:{}", is.id, label));
                seq_source.push(Some((j, a)));
            }
            infosets.push(SeqInfoset {
                id: is.id.clone(),
                tree_infoset: tree_idx,
                parent_seq: usize::MAX, // filled during the walk below
                child_seqs,
                actions: is.actions.clone(),
            });
        }
        let n_seqs = seq_label.len();
        players.push(PlayerSeqs {
            n_seqs,
            seq_label,
            seq_source,
            infosets,
            next_infosets: vec![Vec::new(); n_seqs],
            in_d: vec![false; n_seqs],
        });
    }

    // Walk the tree once, tracking the current sequence of every player and of
    // chance, to fill parent sequences, the chance plan, and the payoff table.
    let mut chance_label = vec![EMPTY_SEQ_LABEL.to_string()];
    let mut chance_plan = vec![1.0];
    let mut entries = Vec::new();

    struct Frame {
        node: usize,
        seqs: Vec<usize>,
        chance_seq: usize,
    }
    let mut stack = vec![Frame {
        node: g.root(),
        seqs: vec![0; n],
        chance_seq: 0,
    }];
    let mut chance_counter = 0usize;
    while let Some(fr) = stack.pop() {
        let node = g.node(fr.node);
        match &node.kind {
            NodeKind::Terminal { payoffs } => {
                entries.push(TerminalEntry {
                    seqs: fr.seqs,
                    chance_seq: fr.chance_seq,
                    chance_weight: chance_plan[fr.chance_seq],
                    payoffs: payoffs.clone(),
                });
            }
            NodeKind::Decision { infoset } => {
                let (pl, j) = local_of_tree[*infoset];
                let cur = fr.seqs[pl];
                let parent = &mut players[pl].infosets[j].parent_seq;
                if *parent == usize::MAX {
                    *parent = cur;
                    players[pl].next_infosets[cur].push(j);
                } else if *parent != cur {
                    // Unreachable once perfect recall has been validated.
                    return Err(Error::ImperfectRecall(format!(
                        "infoset `{}` is reached with two different own sequences",
                        g.infoset(*infoset).id
                    )));
                }
                for (a, &child) in node.children.iter().enumerate() {
                    let mut seqs = fr.seqs.clone();
                    seqs[pl] = players[pl].infosets[j].child_seqs[a];
                    stack.push(Frame {
                        node: child,
                        seqs,
                        chance_seq: fr.chance_seq,
                    });
                }
            }
            NodeKind::Chance { actions, probs } => {
                let set_id = chance_counter;
                chance_counter += 1;
                for (a, &child) in node.children.iter().enumerate() {
                    let idx = chance_label.len();
                    chance_label.push(format!("c{}:{}", set_id, actions[a]));
                    chance_plan.push(chance_plan[fr.chance_seq] * probs[a]);
                    stack.push(Frame {
                        node: child,
                        seqs: fr.seqs.clone(),
                        chance_seq: idx,
                    });
                }
            }
        }
    }

    // next_infosets insertion above happened in DFS visit order of the *first*
    // member; re-derive it from parent_seq in canonical infoset order so the
    // indexing never depends on the walk order.
    for p in players.iter_mut() {
        for l in p.next_infosets.iter_mut() {
            l.clear();
        }
        for j in 0..p.infosets.len() {
            let parent = p.infosets[j].parent_seq;
            debug_assert_ne!(parent, usize::MAX, "infoset without members");
            p.next_infosets[parent].push(j);
        }
        for (w, d) in p.in_d.iter_mut().enumerate() {
            *d = w > 0 && p.next_infosets[w].is_empty();
        }
    }

    Ok(SequenceFormGame {
        players,
        chance: ChanceSeqs {
            n_seqs: chance_label.len(),
            seq_label: chance_label,
            plan: chance_plan,
        },
        entries,
    })
}


#[cfg(test)]
mod tests {
    use super::testutil::*;
    use super::*;
    use crate::game::parse_game;

    #[test]
    fn fig1_sequence_sets() {
        let sf = fig1();
        let p1 = sf.player(0);
        assert_eq!(p1.n_seqs, 5);
        assert_eq!(
            p1.seq_label,
            vec!["~", "I11:L", "I11:R", "I21:S", "I21:T"]
        );
        let p2 = sf.player(1);
        assert_eq!(
            p2.seq_label,
            vec!["~", "I12:a", "I12:b", "I22:d", "I22:f"]
        );
        assert_eq!(sf.chance().seq_label, vec!["~", "c0:l", "c0:r"]);
        assert_eq!(sf.chance().plan, vec![1.0, 0.5, 0.5]);
        assert_eq!(sf.entries().len(), 8);
        assert_eq!(sf.n0(), 8);
        assert_eq!(sf.m0(), 4);
    }

    #[test]
    fn fig1_d_sets() {
        let sf = fig1();
        let p1 = sf.player(0);
        // D_1 = {L, S, T}; R leads to I21 so it is not in D_1.
        assert_eq!(p1.in_d, vec![false, true, false, true, true]);
        assert_eq!(p1.next_infosets[2], vec![1]);
        // All of player 2's extended sequences are in D_2.
        let p2 = sf.player(1);
        assert_eq!(p2.in_d, vec![false, true, true, true, true]);
        // Exactly one of (j,a) in D_i or M_i nonempty, for every extended sequence.
        for p in sf.players() {
            for w in 1..p.n_seqs {
                assert!(p.in_d[w] ^ !p.next_infosets[w].is_empty());
            }
        }
    }

    #[test]
    fn single_terminal_game_has_only_empty_sequences() {
        let g = parse_game(
            r#"{"players":2,"infosets":[],"root":{"kind":"terminal","payoffs":[0,0]}}"#,
        )
        .unwrap();
        let sf = build_sequence_form(&g).unwrap();
        assert_eq!(sf.player(0).n_seqs, 1);
        assert_eq!(sf.player(1).n_seqs, 1);
        assert_eq!(sf.entries().len(), 1);
        assert_eq!(sf.n0(), 0);
    }

    #[test]
    fn sequence_count_matches_action_count() {
        for sf in [fig1(), fig2(), fig3()] {
            for p in sf.players() {
                let total: usize = p.infosets.iter().map(|is| is.actions.len()).sum();
                assert_eq!(p.n_seqs, 1 + total);
            }
        }
    }

    #[test]
    fn imperfect_recall_is_rejected() {
        let g = parse_game(
            r#"{"players":2,
                "infosets":[{"id":"A","owner":1,"actions":["x","y"]},
                             {"id":"B","owner":2,"actions":["u","v"]}],
                "root":{"kind":"decision","infoset":"A","children":{
                    "x":{"kind":"decision","infoset":"B","children":{
                        "u":{"kind":"decision","infoset":"A","children":{
                            "x":{"kind":"terminal","payoffs":[0,0]},
                            "y":{"kind":"terminal","payoffs":[0,0]}}},
                        "v":{"kind":"terminal","payoffs":[0,0]}}},
                    "y":{"kind":"terminal","payoffs":[0,0]}}}}"#,
        )
        .unwrap();
        assert!(build_sequence_form(&g).is_err());
    }
}
