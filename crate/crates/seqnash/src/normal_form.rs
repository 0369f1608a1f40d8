//! Reduced normal form and a brute-force equilibrium oracle for small games.
//!
//! The oracle exists to anchor tests: it builds the reduced-strategy payoff
//! tensor with chance folded in, evaluates mixed profiles, checks the
//! deviation condition of a Nash equilibrium, and enumerates equilibria on
//! tiny games (support enumeration for two players, grid search plus local
//! Newton polish for three).

use crate::error::{Error, Result};
use crate::game::GameTree;
use crate::seqform::{
    build_sequence_form, enumerate_reduced_strategies, strategy_label, MixedProfile,
    ReducedStrategy, SequenceFormGame,
};
use nalgebra::{DMatrix, DVector};

/// Default cap on the number of strategy profiles.
pub const DEFAULT_PROFILE_CAP: u128 = 1_000_000;

/// The reduced normal form: per-player strategy lists and the payoff tensor
/// over profiles, with chance marginalized out.
#[derive(Debug, Clone)]
pub struct ReducedNormalForm {
    pub strategies: Vec<Vec<ReducedStrategy>>,
    pub labels: Vec<Vec<String>>,
    pub dims: Vec<usize>,
    /// Row-major over `(s^1, ..., s^n)`; each entry is the payoff vector.
    pub payoffs: Vec<Vec<f64>>,
}

impl ReducedNormalForm {
    pub fn num_players(&self) -> usize {
        self.dims.len()
    }

    pub fn flat_index(&self, profile: &[usize]) -> usize {
        let mut idx = 0;
        for (d, &s) in self.dims.iter().zip(profile) {
            idx = idx * d + s;
        }
        idx
    }

    pub fn entry(&self, profile: &[usize]) -> &[f64] {
        &self.payoffs[self.flat_index(profile)]
    }

    fn decode(&self, mut flat: usize, out: &mut [usize]) {
        for k in (0..self.dims.len()).rev() {
            out[k] = flat % self.dims[k];
            flat /= self.dims[k];
        }
    }

    /// CSV dump of the tensor for debugging.
    pub fn to_csv(&self) -> String {
        let n = self.num_players();
        let mut out = String::new();
        for i in 0..n {
            out.push_str(&format!("s{},", i + 1));
        }
        for i in 0..n {
            out.push_str(&format!("u{}", i + 1));
            out.push(if i + 1 == n { '\n' } else { ',' });
        }
        let mut profile = vec![0usize; n];
        for flat in 0..self.payoffs.len() {
            self.decode(flat, &mut profile);
            for (i, &s) in profile.iter().enumerate() {
                out.push_str(&self.labels[i][s]);
                out.push(',');
            }
            for i in 0..n {
                out.push_str(&format!("{}", self.payoffs[flat][i]));
                out.push(if i + 1 == n { '\n' } else { ',' });
            }
        }
        out
    }
}

/// Build the reduced normal form of `g`, guarding against blow-up.
pub fn build_reduced_normal_form(g: &GameTree, cap: u128) -> Result<ReducedNormalForm> {
    let sf = build_sequence_form(g)?;
    build_reduced_normal_form_from(&sf, cap)
}

/// Same as [`build_reduced_normal_form`] but reusing an existing sequence form.
pub fn build_reduced_normal_form_from(
    sf: &SequenceFormGame,
    cap: u128,
) -> Result<ReducedNormalForm> {
    let n = sf.num_players();
    let mut size: u128 = 1;
    for i in 0..n {
        size = size.saturating_mul(crate::seqform::count_reduced_strategies(sf, i));
    }
    if size > cap {
        return Err(Error::NormalFormTooLarge { size, cap });
    }
    let strategies: Vec<Vec<ReducedStrategy>> =
        (0..n).map(|i| enumerate_reduced_strategies(sf, i)).collect();
    let labels: Vec<Vec<String>> = strategies
        .iter()
        .enumerate()
        .map(|(i, list)| list.iter().map(|s| strategy_label(sf, i, s)).collect())
        .collect();
    let dims: Vec<usize> = strategies.iter().map(Vec::len).collect();

    // Indicator tables s^i(w) per player/strategy/sequence keep the per-profile
    // payoff a plain product over the sparse terminal entries.
    let plays: Vec<Vec<Vec<bool>>> = (0..n)
        .map(|i| {
            let p = sf.player(i);
            strategies[i]
                .iter()
                .map(|s| {
                    let mut v = vec![false; p.n_seqs];
                    for w in s.consistent_seqs(p) {
                        v[w] = true;
                    }
                    v
                })
                .collect()
        })
        .collect();

    let total: usize = dims.iter().product();
    let mut payoffs = vec![vec![0.0; n]; total];
    let mut profile = vec![0usize; n];
    for (flat, entry) in payoffs.iter_mut().enumerate() {
        let mut rem = flat;
        for k in (0..n).rev() {
            profile[k] = rem % dims[k];
            rem /= dims[k];
        }
        for e in sf.entries() {
            let mut reached = true;
            for i in 0..n {
                if !plays[i][profile[i]][e.seqs[i]] {
                    reached = false;
                    break;
                }
            }
            if reached {
                for i in 0..n {
                    entry[i] += e.chance_weight * e.payoffs[i];
                }
            }
        }
    }

    Ok(ReducedNormalForm {
        strategies,
        labels,
        dims,
        payoffs,
    })
}

/// Expected payoff vector `u(sigma)` by multilinear contraction.
pub fn mixed_payoff(nf: &ReducedNormalForm, sigma: &MixedProfile) -> Result<Vec<f64>> {
    sigma.validate(&nf.dims)?;
    let n = nf.num_players();
    let mut out = vec![0.0; n];
    let mut profile = vec![0usize; n];
    for flat in 0..nf.payoffs.len() {
        nf.decode(flat, &mut profile);
        let mut prob = 1.0;
        for i in 0..n {
            prob *= sigma.probs[i][profile[i]];
        }
        if prob != 0.0 {
            for i in 0..n {
                out[i] += prob * nf.payoffs[flat][i];
            }
        }
    }
    Ok(out)
}

/// `u^i(s^i, sigma^{-i})` for every player and pure strategy.
pub fn deviation_payoffs(nf: &ReducedNormalForm, sigma: &MixedProfile) -> Result<Vec<Vec<f64>>> {
    sigma.validate(&nf.dims)?;
    let n = nf.num_players();
    let mut out: Vec<Vec<f64>> = nf.dims.iter().map(|&d| vec![0.0; d]).collect();
    let mut profile = vec![0usize; n];
    for flat in 0..nf.payoffs.len() {
        nf.decode(flat, &mut profile);
        for i in 0..n {
            let mut prob = 1.0;
            for q in 0..n {
                if q != i {
                    prob *= sigma.probs[q][profile[q]];
                }
            }
            if prob != 0.0 {
                out[i][profile[i]] += prob * nf.payoffs[flat][i];
            }
        }
    }
    Ok(out)
}

/// Result of the Definition-1 deviation test.
#[derive(Debug, Clone)]
pub struct NashCheck {
    pub is_nash: bool,
    /// Per-player best deviation gain over `u^i(sigma)`.
    pub slacks: Vec<f64>,
}

/// True iff no player gains more than `eps` by any pure deviation.
pub fn is_nash(nf: &ReducedNormalForm, sigma: &MixedProfile, eps: f64) -> Result<NashCheck> {
    let u = mixed_payoff(nf, sigma)?;
    let dev = deviation_payoffs(nf, sigma)?;
    let slacks: Vec<f64> = dev
        .iter()
        .zip(&u)
        .map(|(d, &ui)| d.iter().copied().fold(f64::NEG_INFINITY, f64::max) - ui)
        .collect();
    Ok(NashCheck {
        is_nash: slacks.iter().all(|&s| s <= eps),
        slacks,
    })
}

/// Parameters for [`enumerate_equilibria_small`].
#[derive(Debug, Clone)]
pub struct EnumParams {
    /// Definition-1 tolerance for accepting a candidate.
    pub epsilon: f64,
    /// Simplex grid resolution for the 3-player search.
    pub grid: usize,
    /// Per-player strategy-count cap.
    pub max_strategies: usize,
    /// Profiles closer than this in sup norm are considered duplicates.
    pub dedup_tol: f64,
}

impl Default for EnumParams {
    fn default() -> Self {
        EnumParams {
            epsilon: 1e-8,
            grid: 6,
            max_strategies: 6,
            dedup_tol: 1e-4,
        }
    }
}

/// Brute-force equilibrium enumeration on tiny games. Two players: support
/// enumeration over lexicographically ordered support pairs, solving each
/// indifference system by SVD least squares (degenerate systems yield the
/// min-norm representative of the component). Three players: simplex grid
/// scan refined by Newton on the support indifference conditions. Every
/// returned profile passes [`is_nash`] at `params.epsilon`.
pub fn enumerate_equilibria_small(
    nf: &ReducedNormalForm,
    params: &EnumParams,
) -> Result<Vec<MixedProfile>> {
    let n = nf.num_players();
    if n > 3 {
        return Err(Error::TooManyPlayers { got: n, max: 3 });
    }
    if nf.dims.iter().any(|&d| d > params.max_strategies) {
        return Err(Error::InvalidParameter(format!(
            "strategy counts {:?} exceed enumeration cap {}",
            nf.dims, params.max_strategies
        )));
    }
    let mut found: Vec<MixedProfile> = Vec::new();
    match n {
        1 => {
            let best = nf
                .payoffs
                .iter()
                .enumerate()
                .max_by(|a, b| a.1[0].partial_cmp(&b.1[0]).unwrap())
                .map(|(i, _)| i)
                .unwrap();
            found.push(MixedProfile::pure(&nf.dims, &[best]));
        }
        2 => enumerate_two_player(nf, params, &mut found)?,
        3 => enumerate_three_player(nf, params, &mut found)?,
        _ => unreachable!(),
    }
    Ok(found)
}

fn push_unique(found: &mut Vec<MixedProfile>, cand: MixedProfile, tol: f64) {
    let dup = found.iter().any(|f| {
        f.probs
            .iter()
            .flatten()
            .zip(cand.probs.iter().flatten())
            .all(|(a, b)| (a - b).abs() <= tol)
    });
    if !dup {
        found.push(cand);
    }
}

fn clean_simplex(v: &mut [f64]) -> bool {
    for x in v.iter_mut() {
        if *x < 0.0 {
            if *x < -1e-7 {
                return false;
            }
            *x = 0.0;
        }
    }
    let s: f64 = v.iter().sum();
    if s <= 0.0 {
        return false;
    }
    for x in v.iter_mut() {
        *x /= s;
    }
    true
}

fn enumerate_two_player(
    nf: &ReducedNormalForm,
    params: &EnumParams,
    found: &mut Vec<MixedProfile>,
) -> Result<()> {
    let (d1, d2) = (nf.dims[0], nf.dims[1]);
    let scale = nf
        .payoffs
        .iter()
        .flatten()
        .fold(1.0f64, |m, &v| m.max(v.abs()));
    let u = |i: usize, s1: usize, s2: usize| nf.payoffs[s1 * d2 + s2][i];

    // One player's equalizing mix over its support, given the opponent support
    // it must make indifferent. Rows: indifference on `other_support` plus the
    // simplex sum; solved in least squares, min-norm when under-determined.
    let equalizer = |mix_player: usize, mix_support: &[usize], other_support: &[usize]| {
        let rows = other_support.len() + 1;
        let cols = mix_support.len() + 1; // mix weights plus the common value
        let mut m = DMatrix::zeros(rows, cols);
        let mut b = DVector::zeros(rows);
        for (r, &s_other) in other_support.iter().enumerate() {
            for (c, &s_mix) in mix_support.iter().enumerate() {
                m[(r, c)] = if mix_player == 1 {
                    u(0, s_other, s_mix)
                } else {
                    u(1, s_mix, s_other)
                };
            }
            m[(r, cols - 1)] = -1.0;
        }
        for c in 0..mix_support.len() {
            m[(rows - 1, c)] = 1.0;
        }
        b[rows - 1] = 1.0;
        let svd = m.clone().svd(true, true);
        let sol = svd.solve(&b, 1e-12 * scale.max(1.0)).ok()?;
        let res = (&m * &sol - &b).amax();
        if res > 1e-9 * (1.0 + scale) {
            return None; // inconsistent: no equalizer on this support pair
        }
        let mut mix = vec![0.0; mix_support.len()];
        for (c, v) in mix.iter_mut().enumerate() {
            *v = sol[c];
        }
        if !clean_simplex(&mut mix) {
            return None;
        }
        Some(mix)
    };

    for mask1 in 1u32..(1 << d1) {
        let t1: Vec<usize> = (0..d1).filter(|s| mask1 & (1 << s) != 0).collect();
        for mask2 in 1u32..(1 << d2) {
            let t2: Vec<usize> = (0..d2).filter(|s| mask2 & (1 << s) != 0).collect();
            let Some(y) = equalizer(1, &t2, &t1) else {
                continue;
            };
            let Some(x) = equalizer(0, &t1, &t2) else {
                continue;
            };
            let mut probs = vec![vec![0.0; d1], vec![0.0; d2]];
            for (c, &s) in t1.iter().enumerate() {
                probs[0][s] = x[c];
            }
            for (c, &s) in t2.iter().enumerate() {
                probs[1][s] = y[c];
            }
            let cand = MixedProfile { probs };
            if is_nash(nf, &cand, params.epsilon)?.is_nash {
                push_unique(found, cand, params.dedup_tol);
            }
        }
    }
    Ok(())
}

/// All grid points of the (d-1)-simplex with denominator `g`.
fn simplex_grid(d: usize, g: usize) -> Vec<Vec<f64>> {
    fn rec(k: usize, left: usize, comp: &mut Vec<usize>, g: usize, out: &mut Vec<Vec<f64>>) {
        if k + 1 == comp.len() {
            comp[k] = left;
            out.push(comp.iter().map(|&c| c as f64 / g as f64).collect());
            return;
        }
        for c in 0..=left {
            comp[k] = c;
            rec(k + 1, left - c, comp, g, out);
        }
    }
    let mut out = Vec::new();
    let mut comp = vec![0usize; d];
    rec(0, g, &mut comp, g, &mut out);
    out
}

fn enumerate_three_player(
    nf: &ReducedNormalForm,
    params: &EnumParams,
    found: &mut Vec<MixedProfile>,
) -> Result<()> {
    let grids: Vec<Vec<Vec<f64>>> = nf.dims.iter().map(|&d| simplex_grid(d, params.grid)).collect();
    let mut candidates: Vec<(f64, MixedProfile)> = Vec::new();
    for a in &grids[0] {
        for b in &grids[1] {
            for c in &grids[2] {
                let sigma = MixedProfile {
                    probs: vec![a.clone(), b.clone(), c.clone()],
                };
                let check = is_nash(nf, &sigma, params.epsilon)?;
                let worst = check.slacks.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                if check.is_nash {
                    push_unique(found, sigma, params.dedup_tol);
                } else if worst < 0.5 {
                    candidates.push((worst, sigma));
                }
            }
        }
    }
    candidates.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
    candidates.truncate(200);
    for (_, sigma) in candidates {
        if let Some(polished) = polish_candidate(nf, sigma, params) {
            if is_nash(nf, &polished, params.epsilon)?.is_nash {
                push_unique(found, polished, params.dedup_tol);
            }
        }
    }
    Ok(())
}

/// Newton on the support indifference system: supported strategies of each
/// player share a common value variable, probabilities sum to one, and
/// off-support strategies stay at zero.
fn polish_candidate(
    nf: &ReducedNormalForm,
    mut sigma: MixedProfile,
    params: &EnumParams,
) -> Option<MixedProfile> {
    let n = nf.num_players();
    let supports: Vec<Vec<usize>> = sigma
        .probs
        .iter()
        .map(|p| {
            (0..p.len())
                .filter(|&s| p[s] > 1.0 / (2.0 * params.grid as f64 + 2.0))
                .collect()
        })
        .collect();
    if supports.iter().any(|s| s.is_empty()) {
        return None;
    }
    let mut offsets = vec![0usize; n + 1];
    for i in 0..n {
        offsets[i + 1] = offsets[i] + supports[i].len();
    }
    let nprob = offsets[n];
    // Unknowns: supported probabilities plus one value variable per player.
    let nvar = nprob + n;
    let mut values: Vec<f64> = vec![0.0; n];
    for _ in 0..40 {
        let dev = deviation_payoffs(nf, &sigma).ok()?;
        for i in 0..n {
            values[i] = value_guess(&dev[i], &supports[i]);
        }
        let mut rows = Vec::new();
        for i in 0..n {
            for &s in &supports[i] {
                rows.push((i, Some(s)));
            }
            rows.push((i, None));
        }
        let mut f = DVector::zeros(rows.len());
        for (r, &(i, s)) in rows.iter().enumerate() {
            f[r] = match s {
                Some(s) => dev[i][s] - values[i],
                None => sigma.probs[i].iter().sum::<f64>() - 1.0,
            };
        }
        if f.amax() < 1e-13 {
            break;
        }
        let mut jac = DMatrix::zeros(rows.len(), nvar);
        for (r, &(i, s)) in rows.iter().enumerate() {
            match s {
                Some(s) => {
                    for q in 0..n {
                        if q == i {
                            continue;
                        }
                        for (cq, &sq) in supports[q].iter().enumerate() {
                            jac[(r, offsets[q] + cq)] = pair_coeff(nf, &sigma, i, s, q, sq);
                        }
                    }
                    jac[(r, nprob + i)] = -1.0;
                }
                None => {
                    for ci in 0..supports[i].len() {
                        jac[(r, offsets[i] + ci)] = 1.0;
                    }
                }
            }
        }
        let svd = jac.svd(true, true);
        let step = svd.solve(&(-&f), 1e-10).ok()?;
        if !step.iter().all(|v| v.is_finite()) {
            return None;
        }
        for i in 0..n {
            for (ci, &si) in supports[i].iter().enumerate() {
                sigma.probs[i][si] += step[offsets[i] + ci];
            }
        }
    }
    for p in sigma.probs.iter_mut() {
        if !clean_simplex(p) {
            return None;
        }
    }
    Some(sigma)
}

fn value_guess(dev: &[f64], support: &[usize]) -> f64 {
    support.iter().map(|&s| dev[s]).sum::<f64>() / support.len() as f64
}

/// `d u^i(s_i, sigma^{-i}) / d sigma^q(s_q)`: the contraction with players
/// `i` and `q` pinned to pure strategies.
fn pair_coeff(
    nf: &ReducedNormalForm,
    sigma: &MixedProfile,
    i: usize,
    si: usize,
    q: usize,
    sq: usize,
) -> f64 {
    let n = nf.num_players();
    let mut profile = vec![0usize; n];
    profile[i] = si;
    if q != i {
        profile[q] = sq;
    }
    let free: Vec<usize> = (0..n).filter(|&k| k != i && k != q).collect();
    let mut total = 0.0;
    let mut counter = vec![0usize; free.len()];
    loop {
        let mut prob = 1.0;
        for (slot, &k) in free.iter().enumerate() {
            profile[k] = counter[slot];
            prob *= sigma.probs[k][counter[slot]];
        }
        if prob != 0.0 {
            total += prob * nf.entry(&profile)[i];
        }
        // Odometer increment over the free players' strategies.
        let mut slot = 0;
        loop {
            if slot == free.len() {
                return total;
            }
            counter[slot] += 1;
            if counter[slot] < nf.dims[free[slot]] {
                break;
            }
            counter[slot] = 0;
            slot += 1;
        }
        if free.is_empty() {
            return total;
        }
    }
}
