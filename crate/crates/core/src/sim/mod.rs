//! Synthetic users, the recording attacker and benchmark metrics.

pub mod bench;
pub mod decode;
pub mod policy;
pub mod simulate;

pub use bench::{
    run_benchmark, sample_session, BenchmarkConfig, MetricsReport, DEFAULT_SECONDS_PER_CLICK,
};
pub use decode::{decode_transcript, Decoded};
pub use policy::{
    enumerate_mappings, mapping_count, random_mapping, ButtonChoice, SimulatedUser, UserPolicy,
};
pub use simulate::{default_buttons, parse_pin, simulate, simulate_session};
