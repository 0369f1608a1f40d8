//! Extensive-form game trees: parsing, validation, and perfect-recall checks.
//!
//! Games are loaded from a JSON document:
//!
//! ```text
//! { "players": n,
//!   "infosets": [{ "id", "owner" (1..n or "c"), "actions": [labels] }, ...],
//!   "root": NodeSpec }
//! ```
//!
//! where `NodeSpec` is one of
//! `{ "kind": "decision", "infoset": id, "children": { label: NodeSpec } }`,
//! `{ "kind": "chance", "probs": { label: p }, "children": { label: NodeSpec } }`, or
//! `{ "kind": "terminal", "payoffs": [n reals] }`.
//!
//! A `GameTree` is immutable after construction and safe to share across threads.

use crate::error::{Error, Result};
use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

pub type NodeId = usize;

/// Tolerance for chance probabilities summing to one.
pub const CHANCE_PROB_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum NodeKind {
    /// Owned by the infoset's player; actions come from the infoset.
    Decision { infoset: usize },
    /// Chance move with its own action labels and probabilities.
    Chance { actions: Vec<String>, probs: Vec<f64> },
    Terminal { payoffs: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    pub kind: NodeKind,
    /// One child per action, in action order. Empty for terminals.
    pub children: Vec<NodeId>,
    /// Parent node and the action index leading here. `None` at the root.
    pub parent: Option<(NodeId, usize)>,
}

/// A player information set. All member nodes share the owner and action list.
#[derive(Debug, Clone, PartialEq)]
pub struct InformationSet {
    pub id: String,
    /// 0-based player index. Chance is never represented here.
    pub owner: usize,
    pub actions: Vec<String>,
    /// Member nodes in breadth-first discovery order.
    pub members: Vec<NodeId>,
}

/// A finite extensive-form game tree with perfect-recall validation support.
#[derive(Debug, Clone)]
pub struct GameTree {
    players: usize,
    nodes: Vec<Node>,
    /// Referenced infosets in global breadth-first discovery order.
    infosets: Vec<InformationSet>,
    /// Chance nodes in breadth-first order; each is its own (implicit) infoset.
    chance_nodes: Vec<NodeId>,
}

/// The owner-restricted record of (infoset, action) pairs along the path from
/// the root: `R_i(h)` for the player acting at `h`.
pub type ExperienceRecord = Vec<(usize, usize)>;

/// A perfect-recall violation, naming the first offending infoset and node pair.
#[derive(Debug, Clone, PartialEq)]
pub struct RecallViolation {
    pub infoset: String,
    pub node_a: String,
    pub node_b: String,
}

impl std::fmt::Display for RecallViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "infoset `{}`: nodes `{}` and `{}` have different owner experience records",
            self.infoset, self.node_a, self.node_b
        )
    }
}

// ---------------------------------------------------------------------------
// Raw serde schema
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub(crate) struct RawGame {
    pub players: usize,
    pub infosets: Vec<RawInfoset>,
    pub root: RawNode,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub(crate) struct RawInfoset {
    pub id: String,
    pub owner: RawOwner,
    pub actions: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub(crate) enum RawOwner {
    Player(usize),
    Chance(String),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub(crate) enum RawNode {
    Decision {
        infoset: String,
        children: IndexMap<String, RawNode>,
    },
    Chance {
        probs: IndexMap<String, f64>,
        children: IndexMap<String, RawNode>,
    },
    Terminal {
        payoffs: Vec<f64>,
    },
}

// ---------------------------------------------------------------------------
// Parsing and construction
// ---------------------------------------------------------------------------

/// Parse a game document. See the module docs for the format.
pub fn parse_game(text: &str) -> Result<GameTree> {
    let raw: RawGame = serde_json::from_str(text)?;
    GameTree::from_raw(raw)
}

impl GameTree {
    pub(crate) fn from_raw(raw: RawGame) -> Result<Self> {
        if raw.players == 0 {
            return Err(Error::InvalidGame("players must be >= 1".into()));
        }
        let players = raw.players;

        // Declared player infosets, keyed by id. Chance-owned declarations are
        // allowed by the schema but carry no structure (chance nodes inline
        // their probabilities), so they are ignored.
        let mut declared: IndexMap<String, (usize, Vec<String>)> = IndexMap::new();
        for is in &raw.infosets {
            let owner = match &is.owner {
                RawOwner::Player(p) => {
                    if *p < 1 || *p > players {
                        return Err(Error::InvalidGame(format!(
                            "infoset `{}` owner {} out of range 1..={}",
                            is.id, p, players
                        )));
                    }
                    *p - 1
                }
                RawOwner::Chance(s) if s == "c" => continue,
                RawOwner::Chance(s) => {
                    return Err(Error::InvalidGame(format!(
                        "infoset `{}` owner `{}` must be a player number or \"c\"",
                        is.id, s
                    )));
                }
            };
            if is.actions.is_empty() {
                return Err(Error::InvalidGame(format!(
                    "infoset `{}` has no actions",
                    is.id
                )));
            }
            let mut seen = std::collections::HashSet::new();
            for a in &is.actions {
                if !seen.insert(a) {
                    return Err(Error::InvalidGame(format!(
                        "infoset `{}` has duplicate action `{}`",
                        is.id, a
                    )));
                }
            }
            if declared
                .insert(is.id.clone(), (owner, is.actions.clone()))
                .is_some()
            {
                return Err(Error::InvalidGame(format!(
                    "duplicate infoset id `{}`",
                    is.id
                )));
            }
        }

        let mut nodes: Vec<Node> = Vec::new();
        let mut infosets: Vec<InformationSet> = Vec::new();
        let mut iset_index: IndexMap<String, usize> = IndexMap::new();
        let mut chance_nodes: Vec<NodeId> = Vec::new();

        // Breadth-first construction; infosets take their canonical order from
        // the discovery order of their first member node.
        struct Item {
            raw: RawNode,
            parent: Option<(NodeId, usize)>,
            path: String,
        }
        let mut queue = std::collections::VecDeque::new();
        queue.push_back(Item {
            raw: raw.root,
            parent: None,
            path: "root".to_string(),
        });
        while let Some(item) = queue.pop_front() {
            let id = nodes.len();
            if let Some((p, a)) = item.parent {
                nodes[p].children[a] = id;
            }
            match item.raw {
                RawNode::Terminal { payoffs } => {
                    if payoffs.len() != players {
                        return Err(Error::PayoffArity {
                            path: item.path,
                            got: payoffs.len(),
                            expected: players,
                        });
                    }
                    nodes.push(Node {
                        kind: NodeKind::Terminal { payoffs },
                        children: Vec::new(),
                        parent: item.parent,
                    });
                }
                RawNode::Decision { infoset, children } => {
                    let &(owner, ref actions) = declared
                        .get(&infoset)
                        .ok_or_else(|| Error::DanglingInfoset {
                            infoset: infoset.clone(),
                            path: item.path.clone(),
                        })?;
                    check_children(&item.path, actions, &children)?;
                    let iset = *iset_index.entry(infoset.clone()).or_insert_with(|| {
                        infosets.push(InformationSet {
                            id: infoset.clone(),
                            owner,
                            actions: actions.clone(),
                            members: Vec::new(),
                        });
                        infosets.len() - 1
                    });
                    infosets[iset].members.push(id);
                    nodes.push(Node {
                        kind: NodeKind::Decision { infoset: iset },
                        children: vec![usize::MAX; actions.len()],
                        parent: item.parent,
                    });
                    let mut children = children;
                    for (a, label) in actions.iter().enumerate() {
                        let child = children.swap_remove(label).expect("checked above");
                        queue.push_back(Item {
                            raw: child,
                            parent: Some((id, a)),
                            path: format!("{}/{}", item.path, label),
                        });
                    }
                }
                RawNode::Chance { probs, children } => {
                    let actions: Vec<String> = probs.keys().cloned().collect();
                    if actions.is_empty() {
                        return Err(Error::InvalidGame(format!(
                            "chance node `{}` has no actions",
                            item.path
                        )));
                    }
                    check_children(&item.path, &actions, &children)?;
                    let mut sum = 0.0;
                    for (label, p) in &probs {
                        if *p < 0.0 {
                            return Err(Error::NegativeChanceProb {
                                path: item.path.clone(),
                                action: label.clone(),
                            });
                        }
                        sum += p;
                    }
                    if (sum - 1.0).abs() > CHANCE_PROB_TOL {
                        return Err(Error::ChanceProbSum {
                            path: item.path,
                            sum,
                        });
                    }
                    chance_nodes.push(id);
                    nodes.push(Node {
                        kind: NodeKind::Chance {
                            probs: probs.values().copied().collect(),
                            actions: actions.clone(),
                        },
                        children: vec![usize::MAX; actions.len()],
                        parent: item.parent,
                    });
                    let mut children = children;
                    for (a, label) in actions.iter().enumerate() {
                        let child = children.swap_remove(label).expect("checked above");
                        queue.push_back(Item {
                            raw: child,
                            parent: Some((id, a)),
                            path: format!("{}/{}", item.path, label),
                        });
                    }
                }
            }
        }

        let tree = GameTree {
            players,
            nodes,
            infosets,
            chance_nodes,
        };

        // Every member of an infoset must be owned by the declared owner and
        // expose the declared actions; both hold by construction here (nodes
        // take actions from the infoset), so only cross-player reuse of an
        // infoset id can fail, which the declaration map already prevents.
        Ok(tree)
    }

    pub fn players(&self) -> usize {
        self.players
    }

    pub fn root(&self) -> NodeId {
        0
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id]
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn num_terminals(&self) -> usize {
        self.nodes
            .iter()
            .filter(|n| matches!(n.kind, NodeKind::Terminal { .. }))
            .count()
    }

    /// All referenced player infosets in canonical (BFS discovery) order.
    pub fn infosets(&self) -> &[InformationSet] {
        &self.infosets
    }

    pub fn infoset(&self, idx: usize) -> &InformationSet {
        &self.infosets[idx]
    }

    /// Chance nodes in BFS order. Each chance node forms its own information set.
    pub fn chance_nodes(&self) -> &[NodeId] {
        &self.chance_nodes
    }

    /// Per-player infoset indices in canonical order, plus the chance sets.
    ///
    /// The per-player counts define `m_i`; their sum is `m_0`.
    pub fn enumerate_infosets(&self) -> InfosetEnumeration {
        let mut per_player: Vec<Vec<usize>> = vec![Vec::new(); self.players];
        for (idx, is) in self.infosets.iter().enumerate() {
            per_player[is.owner].push(idx);
        }
        InfosetEnumeration {
            per_player,
            chance: self.chance_nodes.clone(),
        }
    }

    /// Action labels of a node (infoset actions for decisions).
    pub fn node_actions(&self, id: NodeId) -> &[String] {
        match &self.nodes[id].kind {
            NodeKind::Decision { infoset } => &self.infosets[*infoset].actions,
            NodeKind::Chance { actions, .. } => actions,
            NodeKind::Terminal { .. } => &[],
        }
    }

    /// Root-to-node path expressed with action labels, for diagnostics.
    pub fn node_path(&self, id: NodeId) -> String {
        let mut parts = Vec::new();
        let mut cur = id;
        while let Some((p, a)) = self.nodes[cur].parent {
            parts.push(self.node_actions(p)[a].clone());
            cur = p;
        }
        parts.reverse();
        if parts.is_empty() {
            "root".to_string()
        } else {
            format!("root/{}", parts.join("/"))
        }
    }

    /// `R_i(h)` for `player` at node `id`: that player's (infoset, action)
    /// pairs along the path from the root.
    pub fn experience(&self, player: usize, id: NodeId) -> ExperienceRecord {
        let mut rec = Vec::new();
        let mut cur = id;
        while let Some((p, a)) = self.nodes[cur].parent {
            if let NodeKind::Decision { infoset } = self.nodes[p].kind {
                if self.infosets[infoset].owner == player {
                    rec.push((infoset, a));
                }
            }
            cur = p;
        }
        rec.reverse();
        rec
    }

    /// Perfect recall holds iff all members of each infoset carry the same
    /// owner experience record. Returns the first violating pair otherwise.
    pub fn validate_perfect_recall(&self) -> std::result::Result<(), RecallViolation> {
        for is in &self.infosets {
            let first = self.experience(is.owner, is.members[0]);
            for &m in &is.members[1..] {
                if self.experience(is.owner, m) != first {
                    return Err(RecallViolation {
                        infoset: is.id.clone(),
                        node_a: self.node_path(is.members[0]),
                        node_b: self.node_path(m),
                    });
                }
            }
        }
        Ok(())
    }

    /// Serialize back to the interchange format; children keys follow action order.
    pub fn to_json(&self) -> String {
        let raw = self.to_raw();
        serde_json::to_string_pretty(&raw).expect("game serialization cannot fail")
    }

    pub(crate) fn to_raw(&self) -> RawGame {
        let infosets = self
            .infosets
            .iter()
            .map(|is| RawInfoset {
                id: is.id.clone(),
                owner: RawOwner::Player(is.owner + 1),
                actions: is.actions.clone(),
            })
            .collect();
        RawGame {
            players: self.players,
            infosets,
            root: self.node_to_raw(0),
        }
    }

    fn node_to_raw(&self, id: NodeId) -> RawNode {
        let node = &self.nodes[id];
        match &node.kind {
            NodeKind::Terminal { payoffs } => RawNode::Terminal {
                payoffs: payoffs.clone(),
            },
            NodeKind::Decision { infoset } => {
                let is = &self.infosets[*infoset];
                let children = is
                    .actions
                    .iter()
                    .zip(&node.children)
                    .map(|(a, &c)| (a.clone(), self.node_to_raw(c)))
                    .collect();
                RawNode::Decision {
                    infoset: is.id.clone(),
                    children,
                }
            }
            NodeKind::Chance { actions, probs } => {
                let probs_map = actions.iter().cloned().zip(probs.iter().copied()).collect();
                let children = actions
                    .iter()
                    .zip(&node.children)
                    .map(|(a, &c)| (a.clone(), self.node_to_raw(c)))
                    .collect();
                RawNode::Chance {
                    probs: probs_map,
                    children,
                }
            }
        }
    }

    /// Structural equality: same shape, infosets, actions, probabilities, payoffs.
    pub fn structurally_equal(&self, other: &GameTree) -> bool {
        self.players == other.players
            && self.nodes == other.nodes
            && self.infosets == other.infosets
            && self.chance_nodes == other.chance_nodes
    }
}

/// Result of [`GameTree::enumerate_infosets`].
#[derive(Debug, Clone)]
pub struct InfosetEnumeration {
    /// Canonical infoset indices per player.
    pub per_player: Vec<Vec<usize>>,
    /// Chance node ids (each its own set).
    pub chance: Vec<NodeId>,
}

impl InfosetEnumeration {
    /// Number of non-chance information sets, `m_0`.
    pub fn m0(&self) -> usize {
        self.per_player.iter().map(Vec::len).sum()
    }
}

fn check_children(
    path: &str,
    actions: &[String],
    children: &IndexMap<String, RawNode>,
) -> Result<()> {
    let ok = children.len() == actions.len() && actions.iter().all(|a| children.contains_key(a));
    if !ok {
        return Err(Error::ChildActionMismatch {
            path: path.to_string(),
            got: children.keys().cloned().collect::<Vec<_>>().join(", "),
            expected: actions.join(", "),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fixture(name: &str) -> String {
        let path = format!("{}/../../fixtures/{}", env!("CARGO_MANIFEST_DIR"), name);
        std::fs::read_to_string(path).unwrap()
    }

    #[test]
    fn parses_fig1() {
        let g = parse_game(&fixture("fig1.game.json")).unwrap();
        assert_eq!(g.players(), 2);
        let en = g.enumerate_infosets();
        assert_eq!(en.per_player[0].len(), 2);
        assert_eq!(en.per_player[1].len(), 2);
        assert_eq!(en.chance.len(), 1);
        assert_eq!(en.m0(), 4);
        // |H| and |Z| for the Fig. 1 tree.
        assert_eq!(g.num_nodes(), 15);
        assert_eq!(g.num_terminals(), 8);
        g.validate_perfect_recall().unwrap();
    }

    #[test]
    fn parses_trivial_terminal_game() {
        let g = parse_game(r#"{"players":2,"infosets":[],"root":{"kind":"terminal","payoffs":[0,0]}}"#)
            .unwrap();
        assert_eq!(g.num_nodes(), 1);
        assert_eq!(g.num_terminals(), 1);
        assert_eq!(g.enumerate_infosets().m0(), 0);
    }

    #[test]
    fn parses_fig2_with_chance_root() {
        let g = parse_game(&fixture("fig2.game.json")).unwrap();
        let root = g.node(g.root());
        match &root.kind {
            NodeKind::Chance { probs, .. } => assert_eq!(probs, &vec![0.1, 0.9]),
            _ => panic!("fig2 root must be chance"),
        }
        let en = g.enumerate_infosets();
        assert_eq!(en.per_player[0].len(), 2);
        assert_eq!(en.per_player[1].len(), 2);
        g.validate_perfect_recall().unwrap();
    }

    #[test]
    fn fig3_passes_perfect_recall() {
        let g = parse_game(&fixture("fig3.game.json")).unwrap();
        g.validate_perfect_recall().unwrap();
        assert_eq!(g.enumerate_infosets().per_player[2].len(), 1);
    }

    #[test]
    fn one_shot_single_player_has_one_infoset() {
        let g = parse_game(
            r#"{"players":1,
                "infosets":[{"id":"I","owner":1,"actions":["x","y"]}],
                "root":{"kind":"decision","infoset":"I","children":{
                    "x":{"kind":"terminal","payoffs":[1]},
                    "y":{"kind":"terminal","payoffs":[0]}}}}"#,
        )
        .unwrap();
        assert_eq!(g.enumerate_infosets().per_player[0].len(), 1);
    }

    #[test]
    fn detects_recall_violation_from_own_move() {
        // Root and its own child share an infoset: the child's record contains
        // the owner's root move, the root's record does not.
        let g = parse_game(
            r#"{"players":1,
                "infosets":[{"id":"I","owner":1,"actions":["x","y"]}],
                "root":{"kind":"decision","infoset":"I","children":{
                    "x":{"kind":"decision","infoset":"I","children":{
                        "x":{"kind":"terminal","payoffs":[0]},
                        "y":{"kind":"terminal","payoffs":[0]}}},
                    "y":{"kind":"terminal","payoffs":[0]}}}}"#,
        )
        .unwrap();
        let v = g.validate_perfect_recall().unwrap_err();
        assert_eq!(v.infoset, "I");
    }

    #[test]
    fn syntax_error_reports_position() {
        let err = parse_game("{ \"players\": 2, ").unwrap_err();
        match err {
            Error::Syntax { line, .. } => assert!(line >= 1),
            other => panic!("expected syntax error, got {other}"),
        }
    }

    #[test]
    fn dangling_infoset_is_reported() {
        let err = parse_game(
            r#"{"players":1,"infosets":[],
                "root":{"kind":"decision","infoset":"missing","children":{}}}"#,
        )
        .unwrap_err();
        match err {
            Error::DanglingInfoset { infoset, .. } => assert_eq!(infoset, "missing"),
            other => panic!("unexpected: {other}"),
        }
    }

    #[test]
    fn payoff_arity_is_checked() {
        let err = parse_game(r#"{"players":2,"infosets":[],"root":{"kind":"terminal","payoffs":[1]}}"#)
            .unwrap_err();
        assert!(matches!(err, Error::PayoffArity { got: 1, expected: 2, .. }));
    }

    #[test]
    fn chance_probs_must_sum_to_one() {
        let err = parse_game(
            r#"{"players":1,"infosets":[],
                "root":{"kind":"chance","probs":{"l":0.6,"r":0.6},
                        "children":{"l":{"kind":"terminal","payoffs":[0]},
                                    "r":{"kind":"terminal","payoffs":[0]}}}}"#,
        )
        .unwrap_err();
        assert!(matches!(err, Error::ChanceProbSum { .. }));
    }

    #[test]
    fn children_must_match_actions() {
        let err = parse_game(
            r#"{"players":1,
                "infosets":[{"id":"I","owner":1,"actions":["x","y"]}],
                "root":{"kind":"decision","infoset":"I","children":{
                    "x":{"kind":"terminal","payoffs":[0]}}}}"#,
        )
        .unwrap_err();
        assert!(matches!(err, Error::ChildActionMismatch { .. }));
    }

    #[test]
    fn round_trip_is_stable() {
        for f in ["fig1.game.json", "fig2.game.json", "fig3.game.json"] {
            let g = parse_game(&fixture(f)).unwrap();
            let g2 = parse_game(&g.to_json()).unwrap();
            assert!(g.structurally_equal(&g2), "round trip changed {f}");
        }
    }

    #[test]
    fn decision_node_actions_equal_infoset_actions() {
        let g = parse_game(&fixture("fig1.game.json")).unwrap();
        for id in 0..g.num_nodes() {
            if let NodeKind::Decision { infoset } = g.node(id).kind {
                assert_eq!(g.node_actions(id), &g.infoset(infoset).actions[..]);
                assert_eq!(g.node(id).children.len(), g.infoset(infoset).actions.len());
            }
        }
    }
}
