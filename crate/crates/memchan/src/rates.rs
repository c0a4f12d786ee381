//! The three routes to the regularized diagonal entropy rate.
//!
//! * brute force: Shannon entropy of the dephased diagonal at increasing
//!   ring sizes, with the rate estimated from the last entropy increment;
//! * transfer: Perron data of the 2x2 transfer matrix, turned into a
//!   stationary Markov chain whose entropy rate is the limit;
//! * thermo: the free-energy derivative `(1 - β ∂_β) ln λ_max` of the
//!   equivalent classical Ising chain, converted from nats to bits.

use crate::env::{ClassicalIsingEnv, DiagonalParams, Environment, MarkovEnv};
use crate::error::{Error, Result};

/// Which engine produced a rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    Brute,
    Transfer,
    Thermo,
    Markov,
}

impl Route {
    pub fn name(&self) -> &'static str {
        match self {
            Route::Brute => "brute",
            Route::Transfer => "transfer",
            Route::Thermo => "thermo",
            Route::Markov => "markov",
        }
    }
}

/// Route-specific evidence attached to a computed rate.
#[derive(Debug, Clone)]
pub enum RateDiagnostics {
    /// Finite-size entropies `(sites, bits)` and a non-monotonicity warning.
    FiniteSize { entropies: Vec<(usize, f64)>, non_monotone: bool },
    /// Perron eigenvalue/eigenvector and induced stationary chain.
    Perron { eigenvalue: f64, eigenvector: [f64; 2], chain: [[f64; 2]; 2], stationary: [f64; 2] },
    /// Degenerate `c = 0` branch: two frozen configurations, rate 0.
    Frozen,
    /// Free energy per site (nats) and its β-derivative.
    FreeEnergy { value: f64, beta_derivative: f64 },
    /// Direct stationary-chain formula.
    StationaryChain,
}

/// Entropy rate in bits per site, with provenance.
#[derive(Debug, Clone)]
pub struct EntropyRateResult {
    pub rate: f64,
    pub route: Route,
    pub diagnostics: RateDiagnostics,
}

/// Brute-force route: dephased-diagonal entropies over `site_counts`, rate
/// from the last increment (the increment cancels the O(1) degeneracy term
/// that contaminates `S_N / N` near transition points).
pub fn entropy_rate_brute(env: &Environment, site_counts: &[usize]) -> Result<EntropyRateResult> {
    if site_counts.len() < 3 {
        return Err(Error::InvalidParameter("need at least 3 site counts".into()));
    }
    if site_counts.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter("site counts must be strictly increasing".into()));
    }
    let mut entropies = Vec::with_capacity(site_counts.len());
    for &n in site_counts {
        let diag = env.dephased_diagonal(n)?;
        entropies.push((n, diag.shannon_entropy()));
    }
    let non_monotone = entropies.windows(2).any(|w| w[1].1 < w[0].1 - 1e-12);
    let (n_prev, s_prev) = entropies[entropies.len() - 2];
    let (n_last, s_last) = entropies[entropies.len() - 1];
    let rate = (s_last - s_prev) / (n_last - n_prev) as f64;
    Ok(EntropyRateResult {
        rate,
        route: Route::Brute,
        diagnostics: RateDiagnostics::FiniteSize { entropies, non_monotone },
    })
}

/// Transfer-matrix route. For `c = 0` the chain freezes into the two uniform
/// configurations and the entropy is not extensive: the rate is exactly 0.
pub fn entropy_rate_transfer(params: &DiagonalParams) -> EntropyRateResult {
    if params.c == 0.0 {
        return EntropyRateResult {
            rate: 0.0,
            route: Route::Transfer,
            diagnostics: RateDiagnostics::Frozen,
        };
    }
    let (a, b) = (params.a, params.b);
    let w = (params.c * a * b).sqrt();
    let (lambda, _) = params.transfer_eigenvalues();
    // Right Perron eigenvector of [[a, w], [w, b]]; both entries positive.
    let v = [w, lambda - a];
    let t = [[a, w], [w, b]];
    let mut chain = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            chain[i][j] = t[i][j] * v[j] / (lambda * v[i]);
        }
    }
    // Two-state stationary distribution of the induced chain.
    let denom = chain[0][1] + chain[1][0];
    let stationary = [chain[1][0] / denom, chain[0][1] / denom];
    let mut rate = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            if chain[i][j] > 0.0 {
                rate -= stationary[i] * chain[i][j] * chain[i][j].log2();
            }
        }
    }
    EntropyRateResult {
        rate,
        route: Route::Transfer,
        diagnostics: RateDiagnostics::Perron { eigenvalue: lambda, eigenvector: v, chain, stationary },
    }
}

/// Thermodynamic route: `log2(e) (1 - β ∂_β) f(β)` with `f = ln λ_max`.
/// The derivative uses a central difference at relative step 1e-5 with one
/// Richardson refinement.
pub fn entropy_rate_thermo(env: &ClassicalIsingEnv) -> Result<EntropyRateResult> {
    let beta = env.beta();
    let f = |b: f64| -> Result<f64> { Ok(env.with_beta(b)?.dominant_eigenvalue().ln()) };
    let h = beta * 1e-5;
    if beta + h == beta {
        return Err(Error::StepUnderflow(beta));
    }
    let central = |h: f64| -> Result<f64> { Ok((f(beta + h)? - f(beta - h)?) / (2.0 * h)) };
    let d_h = central(h)?;
    let d_h2 = central(h / 2.0)?;
    let derivative = (4.0 * d_h2 - d_h) / 3.0;
    let value = f(beta)?;
    let rate_nats = value - beta * derivative;
    Ok(EntropyRateResult {
        rate: std::f64::consts::LOG2_E * rate_nats,
        route: Route::Thermo,
        diagnostics: RateDiagnostics::FreeEnergy { value, beta_derivative: derivative },
    })
}

/// Entropy rate of a stationary Markov chain,
/// `-Σ_i π(i) Σ_j P(i,j) log2 P(i,j)`.
pub fn markov_entropy_rate(env: &MarkovEnv) -> EntropyRateResult {
    let p = env.transition();
    let pi = env.stationary();
    let mut rate = 0.0;
    for i in 0..env.state_count() {
        for j in 0..env.state_count() {
            let pij = p[(i, j)];
            if pij > 0.0 && pi[i] > 0.0 {
                rate -= pi[i] * pij * pij.log2();
            }
        }
    }
    EntropyRateResult { rate, route: Route::Markov, diagnostics: RateDiagnostics::StationaryChain }
}

/// Ising chain with the same diagonal weights:
/// `a = e^{β(J+h)}, b = e^{β(J-h)}, c = e^{-4βJ}`.
pub fn ising_to_params(env: &ClassicalIsingEnv) -> Result<DiagonalParams> {
    let bj = env.beta() * env.coupling();
    let bh = env.beta() * env.field();
    let a = (bj + bh).exp();
    let b = (bj - bh).exp();
    let c = (-4.0 * bj).exp();
    if !(a.is_finite() && b.is_finite() && c.is_finite()) || a == 0.0 || b == 0.0 {
        return Err(Error::InvalidParameter(
            "Ising parameters overflow the diagonal-weight map".into(),
        ));
    }
    DiagonalParams::new(a, b, c)
}

/// Inverse map at a chosen β: `J = -ln(c)/(4β)`, `h = ln(a/b)/(2β)`. The
/// overall weight scale is not recoverable, so the round trip reproduces
/// `(a, b, c)` only up to a common factor on `a` and `b`.
pub fn params_to_ising(params: &DiagonalParams, beta: f64) -> Result<ClassicalIsingEnv> {
    if params.c == 0.0 {
        return Err(Error::NoIsingImage);
    }
    let coupling = -params.c.ln() / (4.0 * beta);
    let field = (params.a / params.b).ln() / (2.0 * beta);
    ClassicalIsingEnv::new(coupling, field, beta)
}

/// Diagonal parameters for environments that reduce to a transfer matrix.
pub fn params_for(env: &Environment) -> Result<DiagonalParams> {
    match env {
        Environment::Mps(_) | Environment::Wolf { .. } => {
            env.as_mps().expect("mps-backed environment").abc_params()
        }
        Environment::Ising(ising) => ising_to_params(ising),
        Environment::Markov(_) | Environment::Explicit(_) => Err(Error::Unsupported(
            "no diagonal (a, b, c) reduction for this environment kind".into(),
        )),
    }
}

/// Binary entropy in bits.
pub fn binary_entropy(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        return 0.0;
    }
    -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
}
