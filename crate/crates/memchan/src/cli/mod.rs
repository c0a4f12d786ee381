//! Command implementations behind the `memchan` binary: config parsing,
//! sweeps with CSV output, channel and forgetfulness reports, and the
//! verification suites.

pub mod config;
pub mod report;
pub mod sweep;
pub mod verify;

pub use config::{
    Axis, ChannelParams, EnvSpec, ForgetfulParams, MarkovKind, RouteName, RunConfig, SweepModel,
    SweepSpec,
};
pub use report::{channel_report, forgetful_report};
pub use sweep::{format_sig, run_sweep, sweep_grid, Flag, RunReport, SweepPoint};
pub use verify::{run_suite, CheckResult, Suite};
