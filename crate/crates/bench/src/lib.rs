//! Shared fixtures for the benchmarks.

use nrecur_core::construction::{build_y, build_z};
use nrecur_core::numtheory::window_params;
use nrecur_core::{CompiledSystem, RecurrenceSystem};

/// `y` followed by every `z(·, d)` at scale `m`, compiled.
pub fn shuffled_family(m: usize) -> Vec<(RecurrenceSystem, CompiledSystem)> {
    let params = window_params(m).expect("valid scale");
    let mut systems = vec![build_y(&params)];
    systems.extend((0..params.rho).map(|d| build_z(&params, d).expect("valid d")));
    systems
        .into_iter()
        .map(|s| {
            let cs = CompiledSystem::compile(&s).expect("fits in i64");
            (s, cs)
        })
        .collect()
}
