//! Residual, analytic Jacobian, and start point of the transformed systems.
//!
//! Row layout: `n0` stationarity rows in x-coordinate order, then `m0` flow
//! rows in nu order. Column layout: `x`, then `nu`, then `t`.

use super::psi::psi;
use super::{CoordMap, HomotopyConfig, HomotopyPoint, Variant};
use crate::error::{Error, Result};
use crate::seqform::{payoff_vectors_all, RealizationProfile, SequenceFormGame};
use nalgebra::{DMatrix, DVector};

/// Primal/dual values recovered from `(x, t)` by the substitution.
#[derive(Debug, Clone)]
pub struct RecoveredPrimalDual {
    pub gamma: RealizationProfile,
    /// `lambda` per player per sequence; zero on coordinates the variant does
    /// not substitute (and on the empty sequence).
    pub lambda: Vec<Vec<f64>>,
}

/// Per-coordinate recovery with chain-rule partials, shared by the residual
/// and the Jacobian.
struct Recovery {
    /// Full per-player plans (entry 0 = 1).
    gammas: Vec<Vec<f64>>,
    /// Per x coordinate.
    gamma: Vec<f64>,
    lambda: Vec<f64>,
    dg_dx: Vec<f64>,
    dl_dx: Vec<f64>,
    dg_dt: Vec<f64>,
    dl_dt: Vec<f64>,
}

/// A homotopy system bound to one game and configuration.
///
/// Precomputes the coordinate layout and per-coordinate constants
/// (`tau0 = gamma0^{1/kappa0}`, substitution flags, `|M_i(w)|`).
pub struct HomotopySystem<'a> {
    sf: &'a SequenceFormGame,
    cfg: HomotopyConfig,
    map: CoordMap,
    /// Whether the coordinate goes through the psi substitution.
    subst: Vec<bool>,
    tau0: Vec<f64>,
    gamma0_flat: Vec<f64>,
    /// `|M_i(w)|` per coordinate.
    m_count: Vec<usize>,
}

impl<'a> HomotopySystem<'a> {
    pub fn new(sf: &'a SequenceFormGame, cfg: HomotopyConfig) -> Result<Self> {
        let map = CoordMap::new(sf);
        if cfg.alpha.len() != map.n0() {
            return Err(Error::DimensionMismatch(format!(
                "alpha has {} entries, expected {}",
                cfg.alpha.len(),
                map.n0()
            )));
        }
        cfg.gamma0.validate(sf)?;
        let n0 = map.n0();
        let mut subst = vec![false; n0];
        let mut tau0 = vec![0.0; n0];
        let mut gamma0_flat = vec![0.0; n0];
        let mut m_count = vec![0usize; n0];
        for (i, p) in sf.players().iter().enumerate() {
            for w in 1..p.n_seqs {
                let k = map.x_of(i, w);
                subst[k] = match cfg.variant {
                    Variant::Lgne => p.in_d[w],
                    Variant::Lbne => true,
                };
                gamma0_flat[k] = cfg.gamma0.plans[i][w];
                tau0[k] = gamma0_flat[k].powf(1.0 / cfg.kappa0);
                m_count[k] = p.next_infosets[w].len();
            }
        }
        Ok(HomotopySystem {
            sf,
            cfg,
            map,
            subst,
            tau0,
            gamma0_flat,
            m_count,
        })
    }

    pub fn game(&self) -> &SequenceFormGame {
        self.sf
    }

    pub fn config(&self) -> &HomotopyConfig {
        &self.cfg
    }

    pub fn coords(&self) -> &CoordMap {
        &self.map
    }

    pub fn n_equations(&self) -> usize {
        self.map.n0() + self.map.m0()
    }

    /// Number of unknowns including the parameter `t`.
    pub fn n_unknowns(&self) -> usize {
        self.n_equations() + 1
    }

    fn recover_inner(&self, point: &HomotopyPoint) -> Recovery {
        let k0 = self.cfg.kappa0;
        let t = point.t;
        let r = if t > 0.0 { t.powf(1.0 / k0) } else { 0.0 };
        let dr_dt = if t > 0.0 {
            t.powf(1.0 / k0 - 1.0) / k0
        } else {
            0.0
        };
        let n0 = self.map.n0();
        let mut rec = Recovery {
            gammas: self
                .sf
                .players()
                .iter()
                .map(|p| {
                    let mut v = vec![0.0; p.n_seqs];
                    v[0] = 1.0;
                    v
                })
                .collect(),
            gamma: vec![0.0; n0],
            lambda: vec![0.0; n0],
            dg_dx: vec![0.0; n0],
            dl_dx: vec![0.0; n0],
            dg_dt: vec![0.0; n0],
            dl_dt: vec![0.0; n0],
        };
        for (i, p) in self.sf.players().iter().enumerate() {
            for w in 1..p.n_seqs {
                let k = self.map.x_of(i, w);
                if self.subst[k] {
                    let e = psi(point.x[k], r, self.tau0[k], k0);
                    rec.gamma[k] = e.psi1;
                    rec.lambda[k] = e.psi2;
                    rec.dg_dx[k] = e.d1_dv;
                    rec.dl_dx[k] = e.d2_dv;
                    rec.dg_dt[k] = e.d1_dr * dr_dt;
                    rec.dl_dt[k] = e.d2_dr * dr_dt;
                } else {
                    rec.gamma[k] = point.x[k];
                    rec.dg_dx[k] = 1.0;
                }
                rec.gammas[i][w] = rec.gamma[k];
            }
        }
        rec
    }

    /// Recovered `gamma(x, t)` and `lambda(x, t)`. On substituted coordinates
    /// `gamma * lambda = t * gamma0` holds by construction.
    pub fn recover_primal_dual(&self, point: &HomotopyPoint) -> RecoveredPrimalDual {
        let rec = self.recover_inner(point);
        let lambda = self
            .sf
            .players()
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let mut v = vec![0.0; p.n_seqs];
                for w in 1..p.n_seqs {
                    v[w] = rec.lambda[self.map.x_of(i, w)];
                }
                v
            })
            .collect();
        RecoveredPrimalDual {
            gamma: RealizationProfile { plans: rec.gammas },
            lambda,
        }
    }

    /// System residual in `R^{n0+m0}`.
    pub fn residual(&self, point: &HomotopyPoint) -> DVector<f64> {
        let rec = self.recover_inner(point);
        let g = payoff_vectors_all(self.sf, &rec.gammas);
        let t = point.t;
        let n0 = self.map.n0();
        let mut out = DVector::zeros(self.n_equations());
        for (i, p) in self.sf.players().iter().enumerate() {
            for w in 1..p.n_seqs {
                let k = self.map.x_of(i, w);
                let (j, _) = p.seq_source[w].expect("extended sequence");
                let zeta: f64 = p.next_infosets[w]
                    .iter()
                    .map(|&jq| point.nu[self.map.nu_of(i, jq)])
                    .sum();
                let mut row = (1.0 - t) * g[i][w] - point.nu[self.map.nu_of(i, j)] + zeta
                    - t * (1.0 - t) * self.cfg.alpha[k];
                match self.cfg.variant {
                    Variant::Lgne => {
                        if self.subst[k] {
                            row += rec.lambda[k] - t;
                        }
                    }
                    Variant::Lbne => {
                        row += (1.0 - self.m_count[k] as f64) * rec.lambda[k];
                    }
                }
                out[k] = row;
            }
            for (j, is) in p.infosets.iter().enumerate() {
                let sum: f64 = is.child_seqs.iter().map(|&c| rec.gammas[i][c]).sum();
                out[n0 + self.map.nu_of(i, j)] = sum - rec.gammas[i][is.parent_seq];
            }
        }
        out
    }

    /// Analytic Jacobian, `(n0+m0) x (n0+m0+1)`, with respect to `(x, nu, t)`.
    pub fn jacobian(&self, point: &HomotopyPoint) -> DMatrix<f64> {
        debug_assert!(point.t > 0.0, "jacobian needs t > 0");
        let rec = self.recover_inner(point);
        let g = payoff_vectors_all(self.sf, &rec.gammas);
        let n = self.sf.num_players();
        let t = point.t;
        let n0 = self.map.n0();
        let m0 = self.map.m0();
        let t_col = n0 + m0;
        let mut jac = DMatrix::zeros(n0 + m0, n0 + m0 + 1);

        // Payoff coupling: for each table entry and ordered player pair
        // (row i, column i'), the leave-two-out product is the multilinear
        // coefficient of gamma^{i'} in g^i(w^i, .).
        let mut vals = vec![0.0f64; n];
        for e in self.sf.entries() {
            for q in 0..n {
                vals[q] = rec.gammas[q][e.seqs[q]];
            }
            for i in 0..n {
                if e.seqs[i] == 0 {
                    continue;
                }
                let row = self.map.x_of(i, e.seqs[i]);
                for ip in 0..n {
                    if ip == i || e.seqs[ip] == 0 {
                        continue;
                    }
                    let mut coef = e.payoffs[i] * e.chance_weight;
                    for q in 0..n {
                        if q != i && q != ip {
                            coef *= vals[q];
                        }
                    }
                    if coef == 0.0 {
                        continue;
                    }
                    let col = self.map.x_of(ip, e.seqs[ip]);
                    jac[(row, col)] += (1.0 - t) * coef * rec.dg_dx[col];
                    jac[(row, t_col)] += (1.0 - t) * coef * rec.dg_dt[col];
                }
            }
        }

        for (i, p) in self.sf.players().iter().enumerate() {
            for w in 1..p.n_seqs {
                let k = self.map.x_of(i, w);
                let (j, _) = p.seq_source[w].expect("extended sequence");
                // d/dt of (1-t) g^i and of the alpha term.
                jac[(k, t_col)] += -g[i][w] - (1.0 - 2.0 * t) * self.cfg.alpha[k];
                match self.cfg.variant {
                    Variant::Lgne => {
                        if self.subst[k] {
                            jac[(k, k)] += rec.dl_dx[k];
                            jac[(k, t_col)] += rec.dl_dt[k] - 1.0;
                        }
                    }
                    Variant::Lbne => {
                        let f = 1.0 - self.m_count[k] as f64;
                        jac[(k, k)] += f * rec.dl_dx[k];
                        jac[(k, t_col)] += f * rec.dl_dt[k];
                    }
                }
                jac[(k, n0 + self.map.nu_of(i, j))] -= 1.0;
                for &jq in &p.next_infosets[w] {
                    jac[(k, n0 + self.map.nu_of(i, jq))] += 1.0;
                }
            }
            for (j, is) in p.infosets.iter().enumerate() {
                let row = n0 + self.map.nu_of(i, j);
                for &c in &is.child_seqs {
                    let kc = self.map.x_of(i, c);
                    jac[(row, kc)] += rec.dg_dx[kc];
                    jac[(row, t_col)] += rec.dg_dt[kc];
                }
                if is.parent_seq != 0 {
                    let kp = self.map.x_of(i, is.parent_seq);
                    jac[(row, kp)] -= rec.dg_dx[kp];
                    jac[(row, t_col)] -= rec.dg_dt[kp];
                }
            }
        }
        jac
    }

    /// The unique solution of the `t = 1` system: the path's start point.
    ///
    /// LGNE starts at `x = gamma0^{1/kappa0} - 1` on substituted coordinates,
    /// `x = gamma0` elsewhere, `nu = 0`; LBNE substitutes every coordinate and
    /// starts at `nu = 1`.
    pub fn start_point(&self) -> HomotopyPoint {
        let n0 = self.map.n0();
        let mut x = vec![0.0; n0];
        for k in 0..n0 {
            x[k] = if self.subst[k] {
                self.tau0[k] - 1.0
            } else {
                self.gamma0_flat[k]
            };
        }
        let nu_value = match self.cfg.variant {
            Variant::Lgne => 0.0,
            Variant::Lbne => 1.0,
        };
        HomotopyPoint {
            x,
            nu: vec![nu_value; self.map.m0()],
            t: 1.0,
        }
    }

    /// Residual sup norm at the start point; must be at most 1e-10.
    pub fn start_residual(&self) -> f64 {
        self.residual(&self.start_point()).amax()
    }
}
