//! Text reports for the `channel` and `forgetful` commands.

use std::fmt::Write as _;

use crate::channels::{build_channel, choi_state, coherent_information, hashing_bound};
use crate::cli::config::RunConfig;
use crate::cli::sweep::format_sig;
use crate::env::Environment;
use crate::error::{Error, Result};
use crate::forgetfulness::{block_convergence, spacer_decay, BlockLayout};
use crate::numerics::DensityMatrix;

fn header(config: &RunConfig) -> String {
    format!("# memchan {}\n# config {}\n", env!("CARGO_PKG_VERSION"), config.echo())
}

/// Finite-use channel report: diagonal entropy, hashing bound, coherent
/// information at the maximally mixed input, and the residual of the
/// identity `hashing = n log2(d) - S(diag)`.
pub fn channel_report(config: &RunConfig, uses: usize) -> Result<String> {
    let env_spec =
        config.env.as_ref().ok_or_else(|| Error::Config("config has no env section".into()))?;
    let env: Environment = env_spec.build()?;
    let weights = env.dephased_diagonal(uses)?;
    let d = weights.alphabet();
    let diag_entropy = weights.shannon_entropy();
    let ch = build_channel(weights, d)?;
    let j = choi_state(&ch)?;
    let hashing = hashing_bound(&j)?;
    let mixed = DensityMatrix::maximally_mixed(ch.weights().len())?;
    let coherent = coherent_information(&ch, &mixed)?;
    let identity_target = uses as f64 * (d as f64).log2() - diag_entropy;
    let residual = (hashing - identity_target).abs();
    let off_pattern = j.max_off_pattern_entry();

    let mut out = header(config);
    let _ = writeln!(out, "uses {uses}");
    let _ = writeln!(out, "levels {d}");
    let _ = writeln!(out, "diagonal_entropy_bits {}", format_sig(diag_entropy));
    let _ = writeln!(out, "hashing_bound_ebits {}", format_sig(hashing));
    let _ = writeln!(out, "coherent_information_bits {}", format_sig(coherent));
    let _ = writeln!(out, "diagonal_identity_residual {}", format_sig(residual));
    let _ = writeln!(out, "choi_off_pattern_max {}", format_sig(off_pattern));
    Ok(out)
}

/// Forgetfulness report: CSV of (spacer, live-vs-product distance, block
/// convergence) plus the decay-fit summary.
pub fn forgetful_report(
    config: &RunConfig,
    live: usize,
    sections: usize,
    spacers: &[usize],
) -> Result<String> {
    let env_spec =
        config.env.as_ref().ok_or_else(|| Error::Config("config has no env section".into()))?;
    let env = env_spec
        .build()?
        .as_mps()
        .ok_or_else(|| Error::Config("forgetful runs need an mps or wolf environment".into()))?;
    if spacers.is_empty() {
        return Err(Error::Config("need at least one spacer length".into()));
    }
    let (rows, fit) = spacer_decay(&env, live, sections, spacers)?;

    let mut out = header(config);
    let _ = writeln!(out, "s,live_product_distance,block_convergence");
    for &(s, distance) in &rows {
        let ring = BlockLayout::new(live, s, sections)?.total_sites();
        let p = block_convergence(&env, live, s, ring)?;
        let _ = writeln!(out, "{s},{},{}", format_sig(distance), format_sig(p));
    }
    let _ = writeln!(out, "# fit decay_rate {}", format_sig(fit.decay_rate));
    let _ = writeln!(out, "# fit intercept {}", format_sig(fit.intercept));
    let _ = writeln!(out, "# fit r_squared {}", format_sig(fit.r_squared));
    let _ = writeln!(out, "# fit samples_used {}", fit.used);
    let _ = writeln!(out, "# verdict {}", fit.verdict.name());
    Ok(out)
}
