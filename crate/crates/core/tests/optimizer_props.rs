use ekbound_core::optimizer::{ff_closed_form, greedy_bound, lp_bound, simplex::Simplex, LpProblem};
use ekbound_core::primes::sieve;
use ekbound_core::{
    coeff_b, sweep_unconditional, CoefficientFamily, Objective, PhiVector, PrimePower, SweepMode,
};
use proptest::prelude::*;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

fn override_8pi() -> f64 {
    EULER_GAMMA + (8.0 * std::f64::consts::PI).ln()
}

fn families() -> Vec<CoefficientFamily> {
    vec![
        CoefficientFamily::nf_grh(),
        CoefficientFamily::nf_uncond_first_term(),
        CoefficientFamily::nf_uncond_first_term().with_arch_override(override_8pi()),
    ]
}

/// Closed form for the GRH optimum over {2, 3, 5, 7}, written out term by term.
fn grh_closed_form() -> f64 {
    let l = |x: f64| x.ln();
    let num = l(2.0) + l(3.0) / 2.0 + l(5.0) / 4.0 + l(7.0) / 6.0;
    let den = l(2.0) / (2f64.sqrt() - 1.0)
        + l(3.0) / (3f64.sqrt() - 1.0)
        + l(5.0) / (5f64.sqrt() - 1.0)
        + l(7.0) / (7f64.sqrt() - 1.0)
        + 0.5 * (EULER_GAMMA + (8.0 * std::f64::consts::PI).ln());
    num / den
}

#[test]
fn grh_greedy_matches_closed_form() {
    let g = greedy_bound(&CoefficientFamily::nf_grh(), Objective::GAMMA, 100).unwrap();
    assert!((g.value - grh_closed_form()).abs() < 1e-12);
}

#[test]
fn truncation_insensitive_under_grh() {
    let fam = CoefficientFamily::nf_grh();
    let small = greedy_bound(&fam, Objective::GAMMA, 11).unwrap();
    let large = greedy_bound(&fam, Objective::GAMMA, 1_000_000).unwrap();
    assert!((small.value - large.value).abs() < 1e-12);
    assert_eq!(small.included_primes, large.included_primes);
}

#[test]
fn greedy_stopping_certificate() {
    for fam in families() {
        for objective in [Objective::GAMMA, Objective::GAMMA_TILDE] {
            let r = greedy_bound(&fam, objective, 200).unwrap();
            let (a_r, a_c) = fam.arch_coeffs().unwrap();
            let (w, a_car, b_car) = match r.carrier.unwrap() {
                ekbound_core::Carrier::C => (2.0, a_c, objective.b_complex()),
                ekbound_core::Carrier::R => (1.0, a_r, objective.b_real()),
            };
            let value_of = |set: &[u64]| {
                let (mut sa, mut sb) = (0.0, 0.0);
                for &p in set {
                    let q = PrimePower::prime(p).unwrap();
                    sa += fam.coeff_a(q).unwrap();
                    sb += coeff_b(q);
                }
                (w * sb + b_car) / (w * sa + a_car)
            };
            assert!((value_of(&r.included_primes) - r.value).abs() < 1e-12);
            for &p in &r.included_primes {
                let rest: Vec<u64> = r.included_primes.iter().copied().filter(|&x| x != p).collect();
                let q = PrimePower::prime(p).unwrap();
                let rho = coeff_b(q) / fam.coeff_a(q).unwrap();
                assert!(rho > value_of(&rest), "{} {p}", fam.name());
            }
            if let Some(rej) = r.first_rejected {
                assert!(rej.ratio <= r.value);
            }
        }
    }
}

#[test]
fn results_validate_and_bind() {
    let mut results = Vec::new();
    for fam in families()
        .into_iter()
        .chain([CoefficientFamily::nf_uncond_full()])
    {
        for objective in [Objective::GAMMA, Objective::GAMMA_TILDE] {
            results.push(greedy_bound(&fam, objective, 150).unwrap());
            results.push(lp_bound(&fam, objective, 60, 2).unwrap());
        }
    }
    for r in &results {
        let v = r.phi.validate(&r.family);
        assert!(v.is_feasible_within(1e-9), "{:?}", v);
        assert!(v.basic_inequality_slack.abs() <= 1e-9);
        // value recomputed from phi
        let recomputed = r.phi.objective_sum(r.objective);
        assert!(((recomputed - r.value) / r.value).abs() < 1e-12);
    }
}

#[test]
fn lp_never_below_greedy() {
    for fam in families()
        .into_iter()
        .chain([CoefficientFamily::nf_uncond_full()])
    {
        for objective in [Objective::GAMMA, Objective::GAMMA_TILDE] {
            for cutoff in [2, 11, 47, 100] {
                let g = greedy_bound(&fam, objective, cutoff).unwrap();
                let lp = lp_bound(&fam, objective, cutoff, 2).unwrap();
                assert!(lp.value >= g.value - 1e-9, "{} {cutoff}", fam.name());
            }
        }
    }
}

#[test]
fn simplex_trace_monotone_and_pivots_bounded() {
    for fam in families() {
        for m_max in 1..=3 {
            let p = LpProblem::build(&fam, Objective::GAMMA, 200, m_max).unwrap();
            let s = Simplex::new(&p.rows, &p.rhs, &p.objective, 1e-12)
                .unwrap()
                .solve(100_000)
                .unwrap();
            assert!(s.trace.windows(2).all(|w| w[1] >= w[0] - 1e-12));
            assert!(s.pivots < 10 * p.variables.len());
        }
    }
}

#[test]
fn function_field_lp_uses_degree_one_only() {
    for q0 in [2u64, 3, 4, 5, 8, 9, 16, 25] {
        let fam = CoefficientFamily::function_field(q0).unwrap();
        let lp = lp_bound(&fam, Objective::GAMMA, 0, 6).unwrap();
        let closed = ff_closed_form(q0).unwrap();
        assert!((lp.value - closed.value).abs() < 1e-9);
        for (q, &mass) in &lp.phi.finite {
            if q.q != q0 {
                assert_eq!(mass, 0.0, "q0 = {q0}, q = {}", q.q);
            }
        }
        let witness = closed.witness.validate(&fam);
        assert!(witness.basic_inequality_slack.abs() < 1e-12);
        assert!((closed.witness.limit_value(Objective::GAMMA) + closed.value).abs() < 1e-12);
    }
}

#[test]
fn full_sweep_nondecreasing_below_half() {
    let pts = sweep_unconditional(
        Objective::GAMMA,
        &[17, 100, 1_000, 10_000, 100_000],
        SweepMode::Full,
        None,
    )
    .unwrap();
    assert!(pts.windows(2).all(|w| w[1].value >= w[0].value));
    assert!(pts.iter().all(|p| p.value < 0.5 + 1e-9));
}

#[test]
fn unconditional_ratio_exceeds_value() {
    // the ratio test never fires under the full series
    let fam = CoefficientFamily::nf_uncond_full();
    let r = greedy_bound(&fam, Objective::GAMMA, 100_000).unwrap();
    assert!(r.first_rejected.is_none());
    for p in sieve(100_000).unwrap() {
        let q = PrimePower::prime(p).unwrap();
        assert!(coeff_b(q) / fam.coeff_a(q).unwrap() > 0.5);
    }
}

fn arb_phi() -> impl Strategy<Value = PhiVector> {
    let primes = sieve(60).unwrap();
    (
        proptest::collection::vec((0..primes.len(), 1u32..=3, 0.0f64..2.0), 0..8),
        0.0f64..1.0,
        0.0f64..1.0,
    )
        .prop_map(move |(entries, r, c)| {
            let mut phi = PhiVector {
                phi_r: r,
                phi_c: c,
                ..PhiVector::new()
            };
            for (i, m, v) in entries {
                phi.set(PrimePower::new(primes[i], m).unwrap(), v);
            }
            phi
        })
}

proptest! {
    #[test]
    fn added_mass_strictly_decreases(phi in arb_phi(), p_idx in 0usize..10, m in 1u32..=3, extra in 1e-6f64..1.0) {
        let p = sieve(30).unwrap()[p_idx];
        let q = PrimePower::new(p, m).unwrap();
        let mut bigger = phi.clone();
        bigger.set(q, phi.get(&q) + extra);
        for obj in [Objective::GAMMA, Objective::GAMMA_TILDE] {
            prop_assert!(bigger.limit_value(obj) < phi.limit_value(obj));
        }
    }

    #[test]
    fn limit_is_linear(phi in arb_phi(), s in 0.0f64..10.0) {
        for obj in [Objective::GAMMA, Objective::GAMMA_TILDE] {
            let base = phi.limit_value(obj);
            let scaled = phi.scaled(s).limit_value(obj);
            prop_assert!((scaled - s * base).abs() <= 1e-12 * (s * base).abs().max(1e-300) + 1e-15);
        }
    }

    #[test]
    fn limit_is_additive_on_disjoint_supports(a in arb_phi(), b in arb_phi()) {
        let mut b = b;
        b.finite.retain(|q, _| !a.finite.contains_key(q));
        let mut sum = a.clone();
        for (&q, &v) in &b.finite {
            sum.set(q, v);
        }
        sum.phi_r += b.phi_r;
        sum.phi_c += b.phi_c;
        for obj in [Objective::GAMMA, Objective::GAMMA_TILDE] {
            let lhs = sum.limit_value(obj);
            let rhs = a.limit_value(obj) + b.limit_value(obj);
            prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(1.0));
        }
    }

    #[test]
    fn insertion_order_irrelevant(phi in arb_phi()) {
        let mut reversed = PhiVector { phi_r: phi.phi_r, phi_c: phi.phi_c, ..PhiVector::new() };
        for (&q, &v) in phi.finite.iter().rev() {
            reversed.set(q, v);
        }
        let fam = CoefficientFamily::nf_grh();
        prop_assert_eq!(reversed.limit_value(Objective::GAMMA).to_bits(), phi.limit_value(Objective::GAMMA).to_bits());
        prop_assert_eq!(reversed.validate(&fam), phi.validate(&fam));
    }

    #[test]
    fn lp_equals_greedy_on_small_instances(cutoff in 2u64..=200, m_max in 1u32..=3, fam_idx in 0usize..3) {
        let fam = families()[fam_idx];
        let g = greedy_bound(&fam, Objective::GAMMA, cutoff).unwrap();
        let lp = lp_bound(&fam, Objective::GAMMA, cutoff, m_max).unwrap();
        prop_assert!((g.value - lp.value).abs() <= 1e-9, "{} cutoff {} m {}: {} vs {}", fam.name(), cutoff, m_max, g.value, lp.value);
    }
}
