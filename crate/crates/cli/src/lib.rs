//! Batch front-end: scenario files in, deterministic reports out.

pub mod inputs;
pub mod report;
pub mod scenario;

use std::path::PathBuf;
use std::sync::Arc;

use anyhow::Result;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use eqloc::coarsespace::{orbit_union, ExampleSpace};
use eqloc::fingroup::named::{cyclic, klein, symmetric};
use eqloc::fingroup::PermGroup;

pub use inputs::Inputs;
pub use report::{Check, Report, Verdict};
pub use scenario::{run, run_scenario, Options, Scenario, Task};

/// Runs scenario files on a pool of `jobs` threads; reports come back in
/// input order.
pub fn run_batch(paths: &[PathBuf], options: &Options, jobs: usize) -> Result<Vec<Report>> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build()?;
    Ok(pool.install(|| paths.par_iter().map(|p| run_scenario(p, options)).collect()))
}

/// Random orbit unions over small groups for stress runs of the coarse
/// checks; deterministic for a given seed.
pub fn random_spaces(count: usize, seed: u64) -> Result<Vec<ExampleSpace>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let groups: Vec<Arc<PermGroup>> = vec![Arc::new(cyclic(2)), Arc::new(cyclic(3)), Arc::new(klein()), Arc::new(symmetric(3))];
    let coarse = ["diagonal", "orbits", "everything"];
    let born = ["point", "orbit", "everything"];
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let g = &groups[rng.gen_range(0..groups.len())];
        let classes = g.lattice()?.len();
        let mut picked = Vec::new();
        let mut points = 0;
        for _ in 0..rng.gen_range(1..=3) {
            let c = rng.gen_range(0..classes);
            let size = g.order() / g.lattice()?.representative(c).order();
            if points + size <= 16 {
                picked.push(c);
                points += size;
            }
        }
        if picked.is_empty() {
            picked.push(classes - 1);
        }
        let (c, b) = (coarse[rng.gen_range(0..3)], born[rng.gen_range(0..3)]);
        out.push(ExampleSpace {
            label: format!("random {i}: {} orbits {picked:?}, {c}, {b}", g.name()),
            space: orbit_union(g, &picked, c, b)?,
        });
    }
    Ok(out)
}
