use ekbound_core::primes::sieve;
use ekbound_core::seeds::{bundled_seeds, SeedKind};
use ekbound_core::{
    coeff_b, discriminant_alpha, evaluate_seed, search_quadratic, split_ok, tower_phi, CoefficientFamily,
    Objective, PrimePower, QuadraticSeed, SearchSpec, Sign, TowerSeed,
};

fn quadratic_records() -> Vec<(String, QuadraticSeed)> {
    bundled_seeds()
        .into_iter()
        .filter(|r| r.kind == SeedKind::Quadratic)
        .map(|r| (r.label.clone(), r.quadratic_seed().unwrap()))
        .collect()
}

fn radicand_mod(seed: &QuadraticSeed, n: u64) -> u64 {
    let mut r: u128 = 1;
    for &p in &seed.ramified_primes {
        r = r * p as u128 % n as u128;
    }
    let r = r as u64;
    match seed.sign {
        Sign::Positive => r,
        Sign::Negative => (n - r) % n,
    }
}

#[test]
fn split_ok_agrees_with_brute_force() {
    for (label, seed) in quadratic_records() {
        assert_eq!(
            split_ok(&seed, 2).unwrap(),
            radicand_mod(&seed, 8) == 1,
            "{label}"
        );
        for p in sieve(10_000).unwrap().into_iter().skip(1) {
            if seed.ramified_primes.contains(&p) {
                assert!(split_ok(&seed, p).is_err());
                continue;
            }
            let d = radicand_mod(&seed, p);
            let square = (1..p).any(|x| x * x % p == d);
            assert_eq!(split_ok(&seed, p).unwrap(), square, "{label} at {p}");
        }
    }
}

#[test]
fn gamma_value_rederived() {
    for (label, seed) in quadratic_records() {
        let alpha: f64 = seed.ramified_primes.iter().map(|&p| (p as f64).ln()).sum::<f64>() / 2.0;
        let num: f64 = seed
            .split_primes
            .iter()
            .map(|&p| 2.0 * (p as f64).ln() / (p as f64 - 1.0))
            .sum();
        let tower = TowerSeed::from_quadratic(&label, &seed, "").unwrap();
        let got = evaluate_seed(&tower, Objective::GAMMA).unwrap();
        assert!((got + num / alpha).abs() < 1e-12, "{label}: {got}");
        assert!((discriminant_alpha(&seed).unwrap().alpha - alpha).abs() < 1e-12);
    }
}

#[test]
fn tower_phis_are_feasible() {
    let families = [CoefficientFamily::nf_grh(), CoefficientFamily::nf_uncond_full()];
    for record in bundled_seeds() {
        let phi = tower_phi(&record.to_tower_seed().unwrap()).unwrap();
        for fam in &families {
            let v = phi.validate(fam);
            assert!(
                v.is_feasible_within(1e-9),
                "{} under {}: {v:?}",
                record.label,
                fam.name()
            );
        }
    }
}

#[test]
fn split_places_lower_and_ramification_raises() {
    let base = TowerSeed::from_quadratic(
        "base",
        &QuadraticSeed::new(
            Sign::Negative,
            vec![5, 7, 11, 13, 17, 19, 23, 29, 31, 37],
            vec![2, 3],
        ),
        "",
    )
    .unwrap();
    let v0 = evaluate_seed(&base, Objective::GAMMA).unwrap();

    let mut more_split = base.clone();
    more_split
        .split_places
        .push(ekbound_core::towers::SplitPlace { q: 41, count: 2 });
    assert!(evaluate_seed(&more_split, Objective::GAMMA).unwrap() < v0);

    let mut more_ramified = base.clone();
    more_ramified.alpha += 0.5 * 43f64.ln();
    let v1 = evaluate_seed(&more_ramified, Objective::GAMMA).unwrap();
    assert!(v1 > v0 && v1 < 0.0);
}

#[test]
fn limit_value_uses_b() {
    let seed = bundled_seeds().into_iter().find(|r| r.label == "zykin").unwrap();
    let tower = seed.to_tower_seed().unwrap();
    let phi = tower_phi(&tower).unwrap();
    let q2 = PrimePower::prime(2).unwrap();
    assert!((phi.get(&q2) * tower.alpha - 2.0).abs() < 1e-12);
    let expected = -(2.0 * coeff_b(q2) + 2.0 * coeff_b(PrimePower::prime(3).unwrap())) / tower.alpha;
    assert!((phi.limit_value(Objective::GAMMA) - expected).abs() < 1e-14);
}

#[test]
fn search_hits_revalidate() {
    let report =
        search_quadratic(&SearchSpec::new(vec![2, 3], 10, 60, Sign::Negative).with_top_k(5)).unwrap();
    assert!(report.exhaustive && report.complete);
    assert!(report.hits.windows(2).all(|w| w[0].value <= w[1].value));
    for hit in &report.hits {
        assert!(hit.feasible && hit.congruences_ok);
        let tower = TowerSeed::from_quadratic("hit", &hit.seed, "").unwrap();
        assert_eq!(evaluate_seed(&tower, Objective::GAMMA).unwrap(), hit.value);
        for &p in &hit.seed.split_primes {
            assert!(split_ok(&hit.seed, p).unwrap());
        }
    }
}

#[test]
fn larger_pool_never_worse() {
    let best = |pool| {
        let r =
            search_quadratic(&SearchSpec::new(vec![2, 3], 10, pool, Sign::Negative).with_top_k(1)).unwrap();
        assert!(r.complete);
        r.hits[0].value
    };
    let (a, b, c) = (best(50), best(60), best(80));
    assert!(b <= a && c <= b);
}

#[test]
fn branch_and_bound_on_large_pool() {
    let small =
        search_quadratic(&SearchSpec::new(vec![2, 3, 5], 12, 80, Sign::Negative).with_top_k(1)).unwrap();
    let large =
        search_quadratic(&SearchSpec::new(vec![2, 3, 5], 12, 200, Sign::Negative).with_top_k(1)).unwrap();
    assert!(!large.exhaustive);
    assert!(large.complete);
    assert!(large.hits[0].value <= small.hits[0].value);
}
