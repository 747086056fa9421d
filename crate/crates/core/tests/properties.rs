use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qthermo::dynamics::{ledger, simulate, CompositeSystem, TimeGrid};
use qthermo::quantum::{random_hermitian, random_levels, random_state, vn_entropy, SubsystemLayout};
use qthermo::thermo::{
    effective_beta, energy_beta, minimize_preparation_cost, path_integral, preparation_cost, state_beta,
    thermal_energy, thermal_snapshot, thermal_state, EffectiveBeta, TemperaturePath,
};

const TOL: f64 = 1e-9;

fn random_pair(seed: u64, dims: (usize, usize)) -> CompositeSystem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let layout = SubsystemLayout::new(vec![dims.0, dims.1], vec!["A", "B"]).unwrap();
    let locals = vec![random_levels(dims.0, 2.0, &mut rng), random_levels(dims.1, 2.0, &mut rng)];
    let coupling = random_hermitian(dims.0 * dims.1, 0.5, &mut rng);
    let states = vec![random_state(dims.0, dims.0, &mut rng), random_state(dims.1, dims.1, &mut rng)];
    CompositeSystem::new(layout, locals, coupling, states).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn entropy_production_nonnegative(seed in any::<u64>(), da in 2usize..4, db in 2usize..4) {
        let system = random_pair(seed, (da, db));
        let traj = simulate(&system, &TimeGrid::uniform(6.0, 25).unwrap()).unwrap();
        for row in ledger(&traj).unwrap() {
            prop_assert!(row.clausius_sum >= -TOL, "clausius sum {} at t = {}", row.clausius_sum, row.t);
            prop_assert!(row.clausius_sum - row.i_tot >= -TOL);
            prop_assert!(row.energy_residual.abs() <= TOL);
            for s in &row.subsystems {
                prop_assert!(s.sigma >= -TOL, "sigma_{} = {} at t = {}", s.label, s.sigma, row.t);
                prop_assert!(s.identity_residual.abs() <= TOL);
                prop_assert!(s.thermal_distance >= -TOL);
            }
        }
    }

    #[test]
    fn generalized_ergotropy_dominates(seed in any::<u64>(), d in 2usize..6, rank in 1usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = random_levels(d, 3.0, &mut rng);
        let rho = random_state(d, rank.min(d), &mut rng);
        let snap = thermal_snapshot(&h, &rho, "S").unwrap();
        prop_assert!(snap.ergotropy >= -TOL);
        prop_assert!(snap.gen_ergotropy >= snap.ergotropy - TOL);
    }

    #[test]
    fn effective_beta_round_trip(seed in any::<u64>(), d in 2usize..6, beta in 0.05f64..8.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = random_levels(d, 2.0, &mut rng);
        prop_assume!(h.spectrum().unwrap().last().unwrap() > &0.05);
        let w = thermal_state(&h, beta).unwrap();
        let back = state_beta(&h, &w).unwrap().value();
        prop_assert!((back - beta).abs() <= 1e-7 * beta.max(1.0), "{back} vs {beta}");
        let b = effective_beta(&h, vn_entropy(&w).unwrap()).unwrap();
        let e = thermal_energy(&h, b).unwrap();
        let star = energy_beta(&h, e).unwrap();
        prop_assert!((star - beta).abs() <= 1e-7 * beta.max(1.0), "{star} vs {beta}");
    }

    #[test]
    fn preparation_cost_minimum(seed in any::<u64>(), d in 2usize..5, beta in 0.05f64..10.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = random_levels(d, 2.0, &mut rng);
        let rho = random_state(d, d, &mut rng);
        let opt = minimize_preparation_cost(&h, &rho).unwrap();
        let snap = thermal_snapshot(&h, &rho, "S").unwrap();
        prop_assert!((opt.w_min - snap.gen_ergotropy).abs() <= 1e-9);
        prop_assert!(preparation_cost(&h, &rho, beta).unwrap() >= opt.w_min - 1e-9);
    }
}

#[test]
fn trapezoid_matches_gibbs_entropy_change() {
    // Along a Gibbs family dS = beta dE, so the path integral equals the entropy change.
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let h = random_levels(4, 2.0, &mut rng);
    let n = 4001;
    let betas: Vec<f64> = (0..n).map(|k| 0.3 + 2.7 * k as f64 / (n - 1) as f64).collect();
    let energies: Vec<f64> = betas
        .iter()
        .map(|&b| thermal_energy(&h, EffectiveBeta::new(b).unwrap()).unwrap())
        .collect();
    let integral = path_integral(TemperaturePath { beta: &betas, thermal_energy: &energies }).unwrap();
    let ds = vn_entropy(&thermal_state(&h, betas[n - 1]).unwrap()).unwrap()
        - vn_entropy(&thermal_state(&h, betas[0]).unwrap()).unwrap();
    assert!((integral - ds).abs() <= 1e-6, "{integral} vs {ds}");
}
