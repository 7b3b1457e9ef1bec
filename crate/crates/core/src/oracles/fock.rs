//! Fock-space references: photon-added coherent states, the Jaynes-Cummings
//! conditional field, and the number-shift (photon adder) operator.
//!
//! Combinatorics are evaluated through log-factorials; naive factorial
//! products overflow `f64` already around `N = 20`.

use num_complex::Complex64 as C64;

/// Cumulative `ln k!` table, `table[n] = ln(n!)`.
fn ln_factorials(n_max: usize) -> Vec<f64> {
    let mut table = Vec::with_capacity(n_max + 1);
    table.push(0.0);
    let mut acc = 0.0;
    for k in 1..=n_max {
        acc += (k as f64).ln();
        table.push(acc);
    }
    table
}

/// `ln(sum_i exp(x_i))` for positive-term sums.
fn log_sum_exp(terms: &[f64]) -> f64 {
    let m = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    m + terms.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

/// Fock truncation covering the Poisson tail to far below 1e-20.
fn truncation(n_bar: f64, extra: usize) -> usize {
    (n_bar + 10.0 * n_bar.sqrt()).ceil() as usize + extra + 10
}

/// Coherent photon number `|<a>|^2` of the normalized `N`-photon-added
/// coherent state `(a^dag)^N |sqrt(n_in)>`, via the closed-form sums
///
/// `<a> = sqrt(n_in) * sum_M A_{N+1,M} n_in^{N-M} / sum_M B_{N,M} n_in^{N-M}`
///
/// with `A_{K,M} = K!(K-1)! / (M!(K-M)!(K-M-1)!)` and
/// `B_{N,M} = (N!)^2 / (M!((N-M)!)^2)`.
pub fn pacs_coherent_number(n_in: f64, n: usize) -> f64 {
    assert!(n >= 1, "photon-added state needs n >= 1");
    assert!(n_in >= 0.0);
    if n_in == 0.0 {
        // A Fock state carries no coherence.
        return 0.0;
    }
    let lf = ln_factorials(2 * n + 2);
    let ln_nin = n_in.ln();

    let ln_a = |k: usize, m: usize| -> f64 {
        // A_{K,M}, defined for M = 0..K-1.
        lf[k] + lf[k - 1] - lf[m] - lf[k - m] - lf[k - m - 1]
    };
    let ln_b = |m: usize| -> f64 { 2.0 * lf[n] - lf[m] - 2.0 * lf[n - m] };

    let num_terms: Vec<f64> =
        (0..=n).map(|m| ln_a(n + 1, m) + (n - m) as f64 * ln_nin).collect();
    let den_terms: Vec<f64> = (0..=n).map(|m| ln_b(m) + (n - m) as f64 * ln_nin).collect();

    let ratio = (log_sum_exp(&num_terms) - log_sum_exp(&den_terms)).exp();
    let amp = n_in.sqrt() * ratio;
    amp * amp
}

/// Brute-force companion: build `(a^dag)^N |sqrt(n_in)>` on a truncated Fock
/// ladder, normalize, and evaluate `|<a>|^2` directly.
pub fn pacs_coherent_number_brute(n_in: f64, n: usize) -> f64 {
    assert!(n >= 1);
    if n_in == 0.0 {
        return 0.0;
    }
    let n_max = truncation(n_in, n);
    let lf = ln_factorials(n_max + n + 1);
    // ln psi_{k+N} = ln c_k + (ln (k+N)! - ln k!)/2 with
    // ln c_k = -n_in/2 + k ln(sqrt(n_in)) - ln(k!)/2.
    let mut psi = vec![0.0f64; n_max + n + 1];
    for k in 0..=n_max {
        let ln_ck = -n_in / 2.0 + 0.5 * k as f64 * n_in.ln() - 0.5 * lf[k];
        psi[k + n] = (ln_ck + 0.5 * (lf[k + n] - lf[k])).exp();
    }
    let norm: f64 = psi.iter().map(|v| v * v).sum();
    let mut amp = 0.0;
    for j in 0..psi.len() - 1 {
        amp += psi[j] * ((j + 1) as f64).sqrt() * psi[j + 1];
    }
    amp /= norm;
    amp * amp
}

/// Conditional field state of the resonant Jaynes-Cummings model given that
/// the initially excited atom has decayed, on a truncated Fock ladder.
#[derive(Clone, Debug)]
pub struct JcConditional {
    /// `sum_n |C_n|^2 sin^2(g sqrt(n+1) t)`: the probability that the atom
    /// is in the ground state at `t`.
    pub decay_probability: f64,
    /// Exact (unnormalized) coefficients of `|Phi(t)>` in the Fock basis.
    pub exact: Vec<C64>,
    /// `t_pi = pi / (2 g sqrt(n_bar))`.
    pub t_pi: f64,
}

/// Exact sums for the conditional field state at time `t`.
pub fn jc_conditional_state(n_bar: f64, g: f64, t: f64) -> JcConditional {
    assert!(n_bar >= 1.0);
    let n_max = truncation(n_bar, 0);
    let lf = ln_factorials(n_max + 1);
    let mut exact = vec![C64::new(0.0, 0.0); n_max + 2];
    let mut decay = 0.0;
    for n in 0..=n_max {
        let ln_cn = -n_bar / 2.0 + 0.5 * n as f64 * n_bar.ln() - 0.5 * lf[n];
        let cn = ln_cn.exp();
        let s = (g * ((n + 1) as f64).sqrt() * t).sin();
        decay += cn * cn * s * s;
        exact[n + 1] = C64::new(0.0, -1.0) * cn * s;
    }
    JcConditional { decay_probability: decay, exact, t_pi: std::f64::consts::PI / (2.0 * g * n_bar.sqrt()) }
}

/// Two-branch coherent approximation of the conditional state at `t_pi`:
/// a pair of coherent states of amplitude `sqrt(n_bar + 1)` and phases
/// `+-pi/(4 n_bar)`, with weights `-+ (1/2) e^{+-i pi/4}`.
pub fn jc_two_branch_state(n_bar: f64) -> Vec<C64> {
    let n_max = truncation(n_bar, 0) + 1;
    let lf = ln_factorials(n_max + 1);
    let beta_mod = (n_bar + 1.0).sqrt();
    let phi = std::f64::consts::FRAC_PI_4 / n_bar;
    let mut state = vec![C64::new(0.0, 0.0); n_max + 1];
    for (sign, weight) in [
        (1.0, -0.5 * C64::from_polar(1.0, std::f64::consts::FRAC_PI_4)),
        (-1.0, 0.5 * C64::from_polar(1.0, -std::f64::consts::FRAC_PI_4)),
    ] {
        let beta = C64::from_polar(beta_mod, sign * phi);
        let ln_beta_mod = beta_mod.ln();
        for k in 0..=n_max {
            let mag = (-beta_mod * beta_mod / 2.0 + k as f64 * ln_beta_mod - 0.5 * lf[k]).exp();
            state[k] += weight * C64::from_polar(mag, beta.arg() * k as f64);
        }
    }
    state
}

/// Normalized modulus of the overlap between two Fock vectors.
pub fn fock_overlap(a: &[C64], b: &[C64]) -> f64 {
    let len = a.len().min(b.len());
    let mut dot = C64::new(0.0, 0.0);
    let mut na = 0.0;
    let mut nb = 0.0;
    for k in 0..len {
        dot += a[k].conj() * b[k];
        na += a[k].norm_sqr();
        nb += b[k].norm_sqr();
    }
    na += a[len..].iter().map(|z| z.norm_sqr()).sum::<f64>();
    nb += b[len..].iter().map(|z| z.norm_sqr()).sum::<f64>();
    dot.norm() / (na * nb).sqrt()
}

/// Exact moments of the photon-added state `V^dag |sqrt(n_bar) e^{i phi}>`,
/// where `V^dag` shifts every Fock component up by one.
#[derive(Clone, Copy, Debug)]
pub struct PhotonAdderCheck {
    /// `<a^dag a>`; equals `n_bar + 1` exactly.
    pub mean_photons: f64,
    /// `<a>`; approximately `sqrt(n_bar + 1) e^{i phi}`.
    pub amplitude: C64,
}

pub fn photon_adder_check(n_bar: f64, phi: f64) -> PhotonAdderCheck {
    assert!(n_bar >= 1.0);
    let n_max = truncation(n_bar, 0);
    let lf = ln_factorials(n_max + 1);
    // |psi'> = sum_n C_n |n+1>, |C_n| Poissonian, phase n*phi.
    let mut mags = vec![0.0f64; n_max + 1];
    for n in 0..=n_max {
        mags[n] = (-n_bar / 2.0 + 0.5 * n as f64 * n_bar.ln() - 0.5 * lf[n]).exp();
    }
    let mean_photons: f64 = mags.iter().enumerate().map(|(n, m)| m * m * (n + 1) as f64).sum();
    // <a> = sum_n conj(C_{n-1}) C_n sqrt(n+1) over the shifted ladder.
    let mut amp = 0.0;
    for n in 1..=n_max {
        amp += mags[n - 1] * mags[n] * ((n + 1) as f64).sqrt();
    }
    PhotonAdderCheck { mean_photons, amplitude: C64::from_polar(amp, phi) }
}
