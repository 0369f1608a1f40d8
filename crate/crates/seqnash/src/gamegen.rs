//! Seeded random extensive-form game families for benchmarking.
//!
//! Both families are parameterized by players `n`, maximum depth `L`, and
//! actions per infoset `A`, with integer payoffs drawn uniformly from
//! [-10, 10].
//!
//! - Type 1: a complete `A`-ary tree of depth `L`; the player at depth `d` is
//!   `d mod n`; histories share an information set iff they differ only in
//!   the final action (sibling groups), and all terminal histories have
//!   length `L`.
//! - Type 2: a chance root with 3 equiprobable actions, then players act
//!   cyclically at depths 1..=L; each decision node continues the game with
//!   its first action and terminates with the other `A - 1` (all `A`
//!   terminate at depth `L`). Odd-indexed players (1-based) get singleton
//!   information sets; even-indexed players' nodes share an information set
//!   iff they carry the same own sequence, which groups the three chance
//!   branches at each depth.
//!
//! The generator is deterministic per seed: ChaCha stream 0 is reserved for
//! structure (both families are structurally deterministic, so it is unused),
//! stream 1 draws payoffs in depth-first order with actions in declared order.

use crate::error::{Error, Result};
use crate::game::{GameTree, RawGame, RawInfoset, RawNode, RawOwner};
use indexmap::IndexMap;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Payoffs are uniform integers in `[-PAYOFF_RANGE, PAYOFF_RANGE]`.
pub const PAYOFF_RANGE: i64 = 10;

/// Guard on the generated tree size.
pub const MAX_NODES: u64 = 2_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GameType {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "2")]
    Two,
}

/// Generator parameters.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GenSpec {
    pub game_type: GameType,
    pub players: usize,
    pub depth: usize,
    pub actions: usize,
    pub seed: u64,
}

impl GenSpec {
    pub fn validate(&self) -> Result<()> {
        if self.players < 2 {
            return Err(Error::InvalidParameter("players must be >= 2".into()));
        }
        if self.depth < self.players {
            return Err(Error::InvalidParameter(
                "depth must be >= the player count".into(),
            ));
        }
        if self.actions < 2 {
            return Err(Error::InvalidParameter("actions must be >= 2".into()));
        }
        let nodes: u64 = match self.game_type {
            GameType::One => {
                let mut total = 1u64;
                let mut level = 1u64;
                for _ in 0..self.depth {
                    level = level.saturating_mul(self.actions as u64);
                    total = total.saturating_add(level);
                }
                total
            }
            GameType::Two => 1 + 3 * (self.depth as u64) * (self.actions as u64),
        };
        if nodes > MAX_NODES {
            return Err(Error::GeneratorLimit(format!(
                "{nodes} nodes exceed the cap {MAX_NODES}"
            )));
        }
        Ok(())
    }
}

/// Generate a game of the requested family.
pub fn generate(spec: &GenSpec) -> Result<GameTree> {
    spec.validate()?;
    match spec.game_type {
        GameType::One => generate_type1(spec),
        GameType::Two => generate_type2(spec),
    }
}

fn action_labels(count: usize) -> Vec<String> {
    (0..count).map(|a| format!("a{a}")).collect()
}

fn payoffs(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n)
        .map(|_| rng.gen_range(-PAYOFF_RANGE..=PAYOFF_RANGE) as f64)
        .collect()
}

/// Type 1: complete tree, sibling information sets, identical terminal depth.
pub fn generate_type1(spec: &GenSpec) -> Result<GameTree> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    rng.set_stream(1);
    let labels = action_labels(spec.actions);

    let mut infosets = Vec::new();
    // Sibling groups at depth d are indexed by the parent's group/action path;
    // one infoset per (depth, parent node). Node ids here are (depth, index
    // within level) with index = running count in depth-first order; since
    // sibling groups are exactly "children of one node", the infoset id can be
    // derived from (depth, parent index).
    fn build(
        depth: usize,
        parent_index: usize,
        spec: &GenSpec,
        labels: &[String],
        infosets: &mut Vec<RawInfoset>,
        declared: &mut std::collections::HashSet<String>,
        rng: &mut ChaCha8Rng,
    ) -> RawNode {
        if depth == spec.depth {
            return RawNode::Terminal {
                payoffs: payoffs(rng, spec.players),
            };
        }
        let owner = depth % spec.players;
        let iset_id = format!("d{depth}g{parent_index}");
        if declared.insert(iset_id.clone()) {
            infosets.push(RawInfoset {
                id: iset_id.clone(),
                owner: RawOwner::Player(owner + 1),
                actions: labels.to_vec(),
            });
        }
        let mut children = IndexMap::new();
        for (a, label) in labels.iter().enumerate() {
            let child_index = parent_index * spec.actions + a;
            children.insert(
                label.clone(),
                build(depth + 1, child_index, spec, labels, infosets, declared, rng),
            );
        }
        RawNode::Decision {
            infoset: iset_id,
            children,
        }
    }

    let mut declared = std::collections::HashSet::new();
    let root = build(0, 0, spec, &labels, &mut infosets, &mut declared, &mut rng);
    GameTree::from_raw(RawGame {
        players: spec.players,
        infosets,
        root,
    })
}

/// Type 2: chance opener, one continuing action per node, own-sequence
/// grouping for even-indexed players.
pub fn generate_type2(spec: &GenSpec) -> Result<GameTree> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    rng.set_stream(1);
    let labels = action_labels(spec.actions);

    let mut infosets: Vec<RawInfoset> = Vec::new();
    let mut declared = std::collections::HashSet::new();
    let mut branches = IndexMap::new();
    let mut probs = IndexMap::new();
    for branch in 0..3usize {
        let mut spine = spine_node(spec, 1, branch, &labels, &mut infosets, &mut declared, &mut rng);
        // The chance action label doubles as the branch name.
        let label = format!("c{branch}");
        probs.insert(label.clone(), 1.0 / 3.0);
        branches.insert(label, std::mem::replace(&mut spine, RawNode::Terminal { payoffs: vec![] }));
    }
    let root = RawNode::Chance {
        probs,
        children: branches,
    };
    GameTree::from_raw(RawGame {
        players: spec.players,
        infosets,
        root,
    })
}

fn spine_node(
    spec: &GenSpec,
    depth: usize,
    branch: usize,
    labels: &[String],
    infosets: &mut Vec<RawInfoset>,
    declared: &mut std::collections::HashSet<String>,
    rng: &mut ChaCha8Rng,
) -> RawNode {
    let player = (depth - 1) % spec.players; // 0-based
    let paper_index_odd = player % 2 == 0; // players 1, 3, ... are odd-indexed
    let iset_id = if paper_index_odd {
        format!("d{depth}b{branch}")
    } else {
        format!("d{depth}")
    };
    if declared.insert(iset_id.clone()) {
        infosets.push(RawInfoset {
            id: iset_id.clone(),
            owner: RawOwner::Player(player + 1),
            actions: labels.to_vec(),
        });
    }
    let mut children = IndexMap::new();
    for (a, label) in labels.iter().enumerate() {
        let child = if a == 0 && depth < spec.depth {
            spine_node(spec, depth + 1, branch, labels, infosets, declared, rng)
        } else {
            RawNode::Terminal {
                payoffs: payoffs(rng, spec.players),
            }
        };
        children.insert(label.clone(), child);
    }
    RawNode::Decision {
        infoset: iset_id,
        children,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seqform::build_sequence_form;

    fn spec(game_type: GameType, n: usize, depth: usize, actions: usize, seed: u64) -> GenSpec {
        GenSpec {
            game_type,
            players: n,
            depth,
            actions,
            seed,
        }
    }

    #[test]
    fn type1_dimensions_match_table_6() {
        for ((n, l, a), dim) in [
            ((3, 5, 2), 49),
            ((3, 6, 2), 97),
            ((3, 7, 2), 193),
            ((3, 8, 2), 385),
            ((3, 4, 3), 57),
            ((3, 4, 4), 111),
            ((3, 4, 5), 193),
        ] {
            let g = generate(&spec(GameType::One, n, l, a, 0)).unwrap();
            let sf = build_sequence_form(&g).unwrap();
            assert_eq!(sf.homotopy_dimension(), dim, "type 1 ({n},{l},{a})");
        }
    }

    #[test]
    fn type2_dimensions_match_table_7() {
        for ((n, l, a), dim) in [
            ((4, 10, 2), 61),
            ((4, 20, 2), 121),
            ((4, 30, 2), 181),
            ((4, 40, 2), 241),
            ((4, 10, 4), 101),
            ((4, 10, 6), 141),
            ((4, 10, 8), 181),
            ((4, 10, 10), 221),
        ] {
            let g = generate(&spec(GameType::Two, n, l, a, 0)).unwrap();
            let sf = build_sequence_form(&g).unwrap();
            assert_eq!(sf.homotopy_dimension(), dim, "type 2 ({n},{l},{a})");
        }
    }

    #[test]
    fn generators_are_seed_deterministic() {
        for ty in [GameType::One, GameType::Two] {
            let a = generate(&spec(ty, 3, 4, 2, 9)).unwrap();
            let b = generate(&spec(ty, 3, 4, 2, 9)).unwrap();
            let c = generate(&spec(ty, 3, 4, 2, 10)).unwrap();
            assert!(a.structurally_equal(&b));
            assert!(!a.structurally_equal(&c), "payoffs should differ by seed");
        }
    }

    #[test]
    fn generated_games_have_perfect_recall() {
        for ty in [GameType::One, GameType::Two] {
            for seed in 0..5 {
                for (n, l, a) in [(2, 3, 2), (3, 5, 2), (4, 6, 3)] {
                    let g = generate(&spec(ty, n, l, a, seed)).unwrap();
                    g.validate_perfect_recall()
                        .unwrap_or_else(|v| panic!("{ty:?} ({n},{l},{a}) seed {seed}: {v}"));
                }
            }
        }
    }

    #[test]
    fn payoffs_are_integers_in_range() {
        let g = generate(&spec(GameType::One, 3, 5, 2, 3)).unwrap();
        for id in 0..g.num_nodes() {
            if let crate::game::NodeKind::Terminal { payoffs } = &g.node(id).kind {
                for &v in payoffs {
                    assert_eq!(v, v.round());
                    assert!((-10.0..=10.0).contains(&v));
                }
            }
        }
    }

    #[test]
    fn payoff_distribution_is_uniform() {
        // Chi-square over the 21 integer values, many seeds; reject only at
        // p < 0.001 (critical value for 20 degrees of freedom: 45.31).
        let mut counts = [0usize; 21];
        let mut total = 0usize;
        for seed in 0..200 {
            let g = generate(&spec(GameType::One, 2, 4, 2, seed)).unwrap();
            for id in 0..g.num_nodes() {
                if let crate::game::NodeKind::Terminal { payoffs } = &g.node(id).kind {
                    for &v in payoffs {
                        counts[(v as i64 + 10) as usize] += 1;
                        total += 1;
                    }
                }
            }
        }
        let expected = total as f64 / 21.0;
        let chi2: f64 = counts
            .iter()
            .map(|&c| {
                let d = c as f64 - expected;
                d * d / expected
            })
            .sum();
        assert!(chi2 < 45.31, "chi2 = {chi2}, counts = {counts:?}");
    }

    #[test]
    fn invalid_specs_are_rejected() {
        assert!(generate(&spec(GameType::One, 1, 3, 2, 0)).is_err());
        assert!(generate(&spec(GameType::One, 3, 2, 2, 0)).is_err());
        assert!(generate(&spec(GameType::One, 2, 3, 1, 0)).is_err());
        assert!(generate(&spec(GameType::One, 2, 40, 2, 0)).is_err()); // size guard
    }
}
