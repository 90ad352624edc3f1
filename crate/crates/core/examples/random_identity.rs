//! Random clusters with holes, slits, wires and nested components all satisfy the energy identity.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use stickydiscs::energy::energy_identity_check;
use stickydiscs::synth::random::{random_cluster, ClusterParams};

fn main() -> stickydiscs::Result<()> {
    let params = ClusterParams {
        nested: true,
        ..ClusterParams::default()
    };
    for seed in 0..8 {
        let c = random_cluster(&mut ChaCha8Rng::seed_from_u64(seed), &params)?;
        let r = energy_identity_check(&c)?;
        let t = &r.terms;
        println!(
            "seed {seed}: N {:>3}  E {:>4}  union Per {:>3}  wires {:>2}  chi {:>2}  residual {}",
            r.n, r.energy, t.union_perimeter, t.wire, t.chi, t.residual_energy2
        );
    }
    Ok(())
}
