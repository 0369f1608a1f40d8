//! Equilibrium-system residuals, dual recovery, and dual boundedness.

use super::{
    best_response_values, payoff_vectors_all, RealizationProfile, SequenceFormGame,
};
use crate::error::{Error, Result};

/// Dual variables for the sequence-form equilibrium system: `lambda` on the
/// `D_i` sequences (stored over all sequences, meaningful where `in_d`), `nu`
/// per infoset. `zeta` is always derived from `nu` and the `M_i` structure.
#[derive(Debug, Clone, PartialEq)]
pub struct DualCertificate {
    pub lambda: Vec<Vec<f64>>,
    pub nu: Vec<Vec<f64>>,
}

impl DualCertificate {
    /// `zeta^i_{I^j_i}(a) = sum of nu over the infosets opened by the sequence`.
    pub fn zeta(&self, sf: &SequenceFormGame, player: usize, seq: usize) -> f64 {
        sf.player(player).next_infosets[seq]
            .iter()
            .map(|&j| self.nu[player][j])
            .sum()
    }
}

/// Grouped residual of the sequence-form equilibrium system.
#[derive(Debug, Clone)]
pub struct NeResidual {
    /// Stationarity rows, one per extended sequence in coordinate order.
    pub stationarity: Vec<f64>,
    /// Flow-conservation rows, one per infoset.
    pub flow: Vec<f64>,
    /// `gamma * lambda` per `D_i` sequence.
    pub complementarity: Vec<f64>,
    /// Nonnegativity violations (`max(0, -gamma)` and `max(0, -lambda)`).
    pub nonneg: Vec<f64>,
}

impl NeResidual {
    pub fn sup(&self) -> f64 {
        self.stationarity
            .iter()
            .chain(&self.flow)
            .chain(&self.complementarity)
            .chain(&self.nonneg)
            .fold(0.0f64, |m, &v| m.max(v.abs()))
    }
}

/// Evaluate the equilibrium-system residual at `(gamma, cert)`. A sup-norm
/// below `eps` certifies an `eps`-approximate sequence-form equilibrium.
pub fn ne_residual(
    sf: &SequenceFormGame,
    gamma: &RealizationProfile,
    cert: &DualCertificate,
) -> Result<NeResidual> {
    let n = sf.num_players();
    if cert.lambda.len() != n || cert.nu.len() != n {
        return Err(Error::DimensionMismatch("certificate player count".into()));
    }
    for (i, p) in sf.players().iter().enumerate() {
        if cert.lambda[i].len() != p.n_seqs || cert.nu[i].len() != p.infosets.len() {
            return Err(Error::DimensionMismatch(format!(
                "certificate dimensions for player {}",
                i + 1
            )));
        }
    }
    let g = payoff_vectors_all(sf, &gamma.plans);
    let mut stationarity = Vec::new();
    let mut flow = Vec::new();
    let mut complementarity = Vec::new();
    let mut nonneg = Vec::new();
    for (i, p) in sf.players().iter().enumerate() {
        for w in 1..p.n_seqs {
            let (j, _) = p.seq_source[w].expect("extended sequence");
            let row = if p.in_d[w] {
                g[i][w] + cert.lambda[i][w] - cert.nu[i][j]
            } else {
                g[i][w] - cert.nu[i][j] + cert.zeta(sf, i, w)
            };
            stationarity.push(row);
            if p.in_d[w] {
                complementarity.push(gamma.plans[i][w] * cert.lambda[i][w]);
                nonneg.push((-cert.lambda[i][w]).max(0.0));
            }
            nonneg.push((-gamma.plans[i][w]).max(0.0));
        }
        for is in &p.infosets {
            let sum: f64 = is.child_seqs.iter().map(|&c| gamma.plans[i][c]).sum();
            flow.push(sum - gamma.plans[i][is.parent_seq]);
        }
    }
    Ok(NeResidual {
        stationarity,
        flow,
        complementarity,
        nonneg,
    })
}

/// Recover duals from a (near-)equilibrium plan by the backward recursion:
/// `nu` is each infoset's best-response value, `lambda` the slack of the
/// first stationarity group on `D_i`.
pub fn recover_duals(sf: &SequenceFormGame, gamma: &RealizationProfile) -> Result<DualCertificate> {
    let mut lambda = Vec::with_capacity(sf.num_players());
    let mut nu = Vec::with_capacity(sf.num_players());
    for i in 0..sf.num_players() {
        let br = best_response_values(sf, i, gamma)?;
        let p = sf.player(i);
        let mut lam = vec![0.0; p.n_seqs];
        for w in 1..p.n_seqs {
            if p.in_d[w] {
                let (j, _) = p.seq_source[w].expect("extended sequence");
                lam[w] = br.infoset_best[j] - br.direct[w];
            }
        }
        lambda.push(lam);
        nu.push(br.infoset_best);
    }
    Ok(DualCertificate { lambda, nu })
}

/// Closed-form boundedness constants for the duals of the barrier system.
#[derive(Debug, Clone)]
pub struct PlayerBounds {
    /// Smallest chance-weighted payoff entry (and 0), `U^i_l`.
    pub u_min: f64,
    /// Largest chance-weighted payoff entry (and 0), `U^i_u`.
    pub u_max: f64,
    /// Upper bound on `nu` from the forward recursion.
    pub nu_upper: f64,
    /// Magnitude bound on `nu` (covers the lower bound `-(|W^i||U^i_l| + |D_i|)`).
    pub nu_magnitude: f64,
    /// Upper bound on `lambda`: `V_u + |U^i_l| + 1`.
    pub lambda_bound: f64,
}

#[derive(Debug, Clone)]
pub struct DualBounds {
    pub per_player: Vec<PlayerBounds>,
    /// `V_u`: global upper bound on `nu` over all players and infosets.
    pub v_u: f64,
}

/// Dual bounds used as tracer sanity diagnostics. Payoff extremes are taken
/// over the chance-weighted sparse table entries `u^i_z * gamma^c(z)`.
pub fn dual_bounds(sf: &SequenceFormGame) -> DualBounds {
    let n = sf.num_players();
    let mut u_min = vec![0.0f64; n];
    let mut u_max = vec![0.0f64; n];
    for e in sf.entries() {
        for i in 0..n {
            let v = e.payoffs[i] * e.chance_weight;
            u_min[i] = u_min[i].min(v);
            u_max[i] = u_max[i].max(v);
        }
    }
    let mut per_player = Vec::with_capacity(n);
    let mut v_u = 0.0f64;
    for (i, p) in sf.players().iter().enumerate() {
        let w_count = p.n_seqs as f64;
        let d_count = p.d_count() as f64;
        let lower_mag = w_count * u_min[i].abs() + d_count;
        // Forward recursion: root infosets get |W^i||U^i_u|; descending
        // through (j, a) adds (|M_i(w a)| - 1) * lower_mag.
        let mut v = vec![0.0f64; p.infosets.len()];
        let mut player_vu = 0.0f64;
        // Canonical order puts parents before children.
        for (j, is) in p.infosets.iter().enumerate() {
            let parent = is.parent_seq;
            v[j] = if parent == 0 {
                w_count * u_max[i].abs()
            } else {
                let (pj, _) = p.seq_source[parent].expect("extended sequence");
                v[pj] + (p.next_infosets[parent].len() as f64 - 1.0) * lower_mag
            };
            player_vu = player_vu.max(v[j]);
        }
        v_u = v_u.max(player_vu);
        per_player.push(PlayerBounds {
            u_min: u_min[i],
            u_max: u_max[i],
            nu_upper: player_vu,
            nu_magnitude: player_vu.max(lower_mag),
            lambda_bound: 0.0, // filled below once the global V_u is known
        });
    }
    for (i, b) in per_player.iter_mut().enumerate() {
        b.lambda_bound = v_u + u_min[i].abs() + 1.0;
        b.nu_magnitude = b.nu_magnitude.max(v_u);
    }
    DualBounds { per_player, v_u }
}
