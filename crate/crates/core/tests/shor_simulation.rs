use std::f64::consts::PI;

use qsafe_core::modnum;
use qsafe_core::shor::{conditional_distribution, recover_period, simulate_quantum_part};

/// `|(1 − q^A)/(1 − q)|² / (N·A)` with `q = exp(2πi·p·y/N)`; the `q = 1`
/// limit is `A/N`.
fn closed_form(period: u64, register: u64, class_size: u64, y: u64) -> f64 {
    let n = register as f64;
    let a = class_size as f64;
    let phase = 2.0 * PI * ((period * y) % register) as f64 / n;
    if (period * y).is_multiple_of(register) {
        return a / n;
    }
    let num = 2.0 - 2.0 * (phase * a).cos();
    let den = 2.0 - 2.0 * phase.cos();
    num / den / (n * a)
}

fn coprime_bases(n: u64) -> impl Iterator<Item = u64> {
    (2..n).filter(move |a| modnum::gcd(*a as i64, n as i64).unwrap() == 1)
}

#[test]
fn distributions_are_normalized_up_to_forty() {
    for n in 3..=40u64 {
        for a in coprime_bases(n) {
            let d = simulate_quantum_part(a, n).unwrap();
            assert!((d.total() - 1.0).abs() < 1e-9, "a={a} n={n}: {}", d.total());
            assert!(d.probs().iter().all(|p| *p >= 0.0));
        }
    }
}

#[test]
fn conditional_spectra_match_geometric_sum() {
    let mut checked_non_dividing = 0;
    for n in [15u64, 21, 33, 35, 39] {
        for a in coprime_bases(n) {
            let p = modnum::period(a as i64, n as i64).unwrap() as u64;
            let mut beta = 1 % n;
            let mut sizes = std::collections::BTreeSet::new();
            for _ in 0..p {
                let (class_size, probs) = conditional_distribution(a, n, beta).unwrap();
                let register = probs.len() as u64;
                sizes.insert(class_size as u64);
                for (y, got) in probs.iter().enumerate() {
                    let want = closed_form(p, register, class_size as u64, y as u64);
                    assert!((got - want).abs() < 1e-6, "a={a} n={n} beta={beta} y={y}: {got} vs {want}");
                }
                beta = beta * a % n;
            }
            let register = qsafe_core::shor::register_size(n).unwrap();
            if !register.is_multiple_of(p) {
                checked_non_dividing += 1;
                // class sizes are floor(N/p) and ceil(N/p)
                assert!(sizes.iter().all(|s| *s == register / p || *s == register / p + 1));
            }
        }
    }
    assert!(checked_non_dividing > 0);
}

#[test]
fn mixture_of_conditionals_is_the_full_distribution() {
    let (a, n) = (2u64, 21u64);
    let d = simulate_quantum_part(a, n).unwrap();
    let p = modnum::period(a as i64, n as i64).unwrap() as u64;
    let mut mix = vec![0.0; d.register() as usize];
    let mut beta = 1;
    for _ in 0..p {
        let (size, probs) = conditional_distribution(a, n, beta).unwrap();
        let weight = size as f64 / d.register() as f64;
        for (m, q) in mix.iter_mut().zip(probs) {
            *m += weight * q;
        }
        beta = beta * a % n;
    }
    for (x, y) in mix.iter().zip(d.probs()) {
        assert!((x - y).abs() < 1e-12);
    }
}

#[test]
fn recovered_periods_are_exact_orders() {
    for n in 3..=200u64 {
        let register = qsafe_core::shor::register_size(n).unwrap();
        for a in coprime_bases(n).step_by(3) {
            let order = modnum::period(a as i64, n as i64).unwrap() as u64;
            for y in (0..register).step_by((register / 64).max(1) as usize) {
                if let Some(p) = recover_period(y, register, a, n).unwrap() {
                    assert_eq!(modnum::mod_pow(a as i64, p as i64, n as i64).unwrap().into_value(), 1);
                    assert_eq!(p, order, "a={a} n={n} y={y}");
                }
            }
        }
    }
}

#[test]
fn factors_the_rsa_example_modulus() {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2773);
    let (d, _) = qsafe_core::shor::shor_factor(2773, &mut rng, 64).unwrap();
    assert!(d == 47 || d == 59);
}
