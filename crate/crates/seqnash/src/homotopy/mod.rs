//! The two interior-point logarithmic-barrier homotopy systems.
//!
//! Both variants deform the sequence-form equilibrium system by a barrier
//! whose strength is the homotopy parameter `t`: at `t = 1` the system has a
//! known unique solution anchored at a strictly positive plan `gamma0`; at
//! `t -> 0` it reduces to the equilibrium system. The complementarity rows are
//! eliminated by the `psi` substitution, leaving `n0 + m0` equations in the
//! unknowns `(x, nu)` and the parameter `t`:
//!
//! - LGNE applies the substitution on the `D_i` coordinates only (the barrier
//!   acts on plain realization weights); remaining coordinates carry `gamma`
//!   directly.
//! - LBNE applies it on every coordinate (the barrier acts on behavior
//!   ratios), with the `(1 - |M_i(w)|)` multiplier on `lambda`.
//!
//! Residual/Jacobian evaluation is pure given `(config, game, point)`;
//! concurrent evaluation at different points is safe.
//!
//! Seed streams: stream 0 of the seeded generator samples `alpha`, stream 1
//! samples a random interior `gamma0`.

mod psi;
mod system;

pub use psi::{psi, Psi};
pub use system::HomotopySystem;

use crate::error::{Error, Result};
use crate::seqform::{RealizationProfile, SequenceFormGame};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Which barrier system to trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Lgne,
    Lbne,
}

impl std::fmt::Display for Variant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Variant::Lgne => write!(f, "lgne"),
            Variant::Lbne => write!(f, "lbne"),
        }
    }
}

impl std::str::FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "lgne" => Ok(Variant::Lgne),
            "lbne" => Ok(Variant::Lbne),
            other => Err(Error::InvalidParameter(format!("unknown variant `{other}`"))),
        }
    }
}

/// Default barrier exponent; the smallest convenient value above the strict
/// bound 2.
pub const DEFAULT_KAPPA0: f64 = 3.0;

/// Default sup-norm bound for the `alpha` perturbation.
pub const DEFAULT_ALPHA_BOUND: f64 = 0.01;

/// A point of the reduced unknown space: `x` over all extended sequences
/// (`n0` entries), `nu` over all infosets (`m0` entries), and the parameter
/// `t in [0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HomotopyPoint {
    pub x: Vec<f64>,
    pub nu: Vec<f64>,
    pub t: f64,
}

/// Flat coordinate layout shared by the residual, Jacobian, and tracer:
/// x coordinates player-major in sequence order, then nu player-major in
/// infoset order, then t.
#[derive(Debug, Clone)]
pub struct CoordMap {
    /// x-offset per player (length n+1; last entry is n0).
    pub x_offset: Vec<usize>,
    /// nu-offset per player (length n+1; last entry is m0).
    pub nu_offset: Vec<usize>,
}

impl CoordMap {
    pub fn new(sf: &SequenceFormGame) -> Self {
        let n = sf.num_players();
        let mut x_offset = vec![0usize; n + 1];
        let mut nu_offset = vec![0usize; n + 1];
        for i in 0..n {
            x_offset[i + 1] = x_offset[i] + sf.player(i).n_extended();
            nu_offset[i + 1] = nu_offset[i] + sf.player(i).infosets.len();
        }
        CoordMap { x_offset, nu_offset }
    }

    pub fn n0(&self) -> usize {
        *self.x_offset.last().unwrap()
    }

    pub fn m0(&self) -> usize {
        *self.nu_offset.last().unwrap()
    }

    /// Flat x index of `(player, seq)` with `seq >= 1`.
    pub fn x_of(&self, player: usize, seq: usize) -> usize {
        self.x_offset[player] + seq - 1
    }

    /// Flat nu column (relative to the nu block) of `(player, infoset)`.
    pub fn nu_of(&self, player: usize, infoset: usize) -> usize {
        self.nu_offset[player] + infoset
    }
}

/// Fully materialized homotopy configuration.
#[derive(Debug, Clone)]
pub struct HomotopyConfig {
    pub variant: Variant,
    pub kappa0: f64,
    /// Strictly positive, flow-consistent anchor plan.
    pub gamma0: RealizationProfile,
    /// Perturbation over the `n0` x-coordinates.
    pub alpha: Vec<f64>,
}

impl HomotopyConfig {
    pub fn new(
        variant: Variant,
        sf: &SequenceFormGame,
        gamma0: RealizationProfile,
        kappa0: f64,
        alpha: Vec<f64>,
    ) -> Result<Self> {
        if kappa0 <= 2.0 {
            return Err(Error::InvalidParameter(format!(
                "kappa0 must be > 2, got {kappa0}"
            )));
        }
        gamma0.validate(sf)?;
        if !gamma0.is_strictly_positive() {
            return Err(Error::InvalidParameter(
                "gamma0 must be strictly positive".into(),
            ));
        }
        let n0 = CoordMap::new(sf).n0();
        if alpha.len() != n0 {
            return Err(Error::DimensionMismatch(format!(
                "alpha has {} entries, expected n0 = {}",
                alpha.len(),
                n0
            )));
        }
        Ok(HomotopyConfig {
            variant,
            kappa0,
            gamma0,
            alpha,
        })
    }
}

/// Reproducible `alpha` sample, uniform in `[-bound, bound]^{n0}`.
pub fn sample_alpha(seed: u64, bound: f64, n0: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(0);
    if bound == 0.0 {
        return vec![0.0; n0];
    }
    (0..n0).map(|_| rng.gen_range(-bound..=bound)).collect()
}

/// `gamma0` initialization of the JSON config and the CLI: the string
/// `"uniform"` or `"random"`, or explicit per-player maps keyed by sequence
/// label.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GammaInit {
    Mode(String),
    Explicit(Vec<indexmap::IndexMap<String, f64>>),
}

impl Default for GammaInit {
    fn default() -> Self {
        GammaInit::Mode("uniform".into())
    }
}

/// Serializable homotopy options:
/// `{ "variant", "kappa0", "alpha_bound", "seed", "gamma0" }`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HomotopyOptions {
    pub variant: Variant,
    #[serde(default = "default_kappa0")]
    pub kappa0: f64,
    #[serde(default = "default_alpha_bound")]
    pub alpha_bound: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub gamma0: GammaInit,
}

fn default_kappa0() -> f64 {
    DEFAULT_KAPPA0
}

fn default_alpha_bound() -> f64 {
    DEFAULT_ALPHA_BOUND
}

impl HomotopyOptions {
    pub fn new(variant: Variant) -> Self {
        HomotopyOptions {
            variant,
            kappa0: DEFAULT_KAPPA0,
            alpha_bound: DEFAULT_ALPHA_BOUND,
            seed: 0,
            gamma0: GammaInit::default(),
        }
    }

    /// Resolve against a game: sample `alpha` (stream 0) and build `gamma0`
    /// (uniform, seeded random on stream 1, or explicit).
    pub fn materialize(&self, sf: &SequenceFormGame) -> Result<HomotopyConfig> {
        let n0 = CoordMap::new(sf).n0();
        let alpha = sample_alpha(self.seed, self.alpha_bound, n0);
        let gamma0 = match &self.gamma0 {
            GammaInit::Mode(m) if m == "uniform" => RealizationProfile::uniform(sf),
            GammaInit::Mode(m) if m == "random" => {
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
                rng.set_stream(1);
                RealizationProfile::random_interior(sf, rng.gen())
            }
            GammaInit::Mode(m) => {
                return Err(Error::InvalidParameter(format!(
                    "gamma0 mode must be \"uniform\" or \"random\", got `{m}`"
                )))
            }
            GammaInit::Explicit(maps) => RealizationProfile::from_labelled(sf, maps)?,
        };
        HomotopyConfig::new(self.variant, sf, gamma0, self.kappa0, alpha)
    }
}
