//! Shor's factoring loop with the quantum period-finding step replaced by an
//! exact classical computation of its measurement distribution.
//!
//! The register after the modular-exponentiation oracle and the measurement
//! of the value register is a uniform superposition over one preimage class
//! `{x : a^x ≡ β}`. Its Fourier transform is computed with an FFT, and the
//! distribution of `y` is the β-weighted mixture of the squared magnitudes.

use std::collections::HashMap;
use std::fmt;

use rand::Rng;
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::modnum;

/// Largest register the simulator will allocate (2²⁴ amplitudes).
pub const MAX_REGISTER: u64 = 1 << 24;

#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementDistribution {
    register: u64,
    probs: Vec<f64>,
}

impl MeasurementDistribution {
    pub fn from_probs(probs: Vec<f64>) -> Result<Self> {
        let register = probs.len() as u64;
        if !register.is_power_of_two() {
            return Err(Error::domain("register size must be a power of two"));
        }
        if probs.iter().any(|p| !(*p >= 0.0)) {
            return Err(Error::domain("negative probability"));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::domain(format!("probabilities sum to {total}")));
        }
        Ok(MeasurementDistribution { register, probs })
    }

    pub fn register(&self) -> u64 {
        self.register
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// Outcomes with probability above `eps`.
    pub fn support(&self, eps: f64) -> Vec<u64> {
        (0..self.register).filter(|&y| self.probs[y as usize] > eps).collect()
    }
}

/// The unique power of two `N` with `n² ≤ N < 2n²`.
pub fn register_size(n: u64) -> Result<u64> {
    if n < 3 {
        return Err(Error::domain(format!("register size needs n >= 3, got {n}")));
    }
    let sq = (n as u128) * (n as u128);
    let size = sq.next_power_of_two();
    u64::try_from(size).map_err(|_| Error::Overflow("register_size"))
}

fn check_base(a: u64, n: u64) -> Result<()> {
    if a <= 1 || a >= n {
        return Err(Error::domain(format!("base {a} must lie in (1, {n})")));
    }
    if modnum::gcd(a as i128, n as i128)? != 1 {
        return Err(Error::NotPeriodic { base: a.to_string(), modulus: n.to_string() });
    }
    Ok(())
}

fn value_table(a: u64, n: u64, size: u64) -> Vec<u32> {
    let mut out = Vec::with_capacity(size as usize);
    let mut acc = 1 % n;
    for _ in 0..size {
        out.push(acc as u32);
        acc = acc * a % n;
    }
    out
}

/// Preimage classes of the value table, keyed by residue.
fn preimage_classes(a: u64, n: u64, size: u64) -> Vec<(u32, Vec<u32>)> {
    let table = value_table(a, n, size);
    let mut classes: Vec<Vec<u32>> = vec![Vec::new(); n as usize];
    for (x, beta) in table.into_iter().enumerate() {
        classes[beta as usize].push(x as u32);
    }
    classes
        .into_iter()
        .enumerate()
        .filter(|(_, xs)| !xs.is_empty())
        .map(|(beta, xs)| (beta as u32, xs))
        .collect()
}

/// `|Σ_{x∈S} ω^{xy}|²` for every `y`.
fn power_spectrum(planner: &mut FftPlanner<f64>, size: usize, support: impl Iterator<Item = u32>) -> Vec<f64> {
    let mut buf = vec![Complex::new(0.0, 0.0); size];
    for x in support {
        buf[x as usize] = Complex::new(1.0, 0.0);
    }
    planner.plan_fft_forward(size).process(&mut buf);
    buf.into_iter().map(|c| c.norm_sqr()).collect()
}

fn checked_register(n: u64) -> Result<u64> {
    let size = register_size(n)?;
    if size > MAX_REGISTER {
        return Err(Error::Unsupported(format!("register of {size} amplitudes exceeds {MAX_REGISTER}")));
    }
    Ok(size)
}

/// Exact distribution of the measured `y` for base `a` modulo `n`.
pub fn simulate_quantum_part(a: u64, n: u64) -> Result<MeasurementDistribution> {
    check_base(a, n)?;
    let size = checked_register(n)?;
    let classes = preimage_classes(a, n, size);

    // |DFT|² is invariant under translation, so classes that are translates
    // of one another share a spectrum. Group them by their shape.
    let mut shapes: HashMap<Vec<u32>, usize> = HashMap::new();
    for (_, xs) in &classes {
        let start = xs[0];
        let shape: Vec<u32> = xs.iter().map(|x| x - start).collect();
        *shapes.entry(shape).or_default() += 1;
    }

    let mut planner = FftPlanner::new();
    let mut probs = vec![0.0; size as usize];
    let scale = 1.0 / (size as f64 * size as f64);
    for (shape, count) in shapes {
        let spectrum = power_spectrum(&mut planner, size as usize, shape.into_iter());
        for (p, s) in probs.iter_mut().zip(spectrum) {
            *p += count as f64 * s * scale;
        }
    }
    Ok(MeasurementDistribution { register: size, probs })
}

/// Distribution of `y` conditioned on the value register having shown
/// `beta`. Returns the class size alongside.
pub fn conditional_distribution(a: u64, n: u64, beta: u64) -> Result<(usize, Vec<f64>)> {
    check_base(a, n)?;
    let size = checked_register(n)?;
    let classes = preimage_classes(a, n, size);
    let (_, xs) = classes
        .into_iter()
        .find(|(b, _)| *b as u64 == beta)
        .ok_or_else(|| Error::domain(format!("{beta} is not a power of {a} mod {n}")))?;
    let class_size = xs.len();
    let mut planner = FftPlanner::new();
    let spectrum = power_spectrum(&mut planner, size as usize, xs.into_iter());
    let norm = 1.0 / (size as f64 * class_size as f64);
    Ok((class_size, spectrum.into_iter().map(|s| s * norm).collect()))
}

/// Draws one outcome by inverse-CDF sampling.
pub fn sample_measurement(dist: &MeasurementDistribution, rng: &mut impl Rng) -> u64 {
    let u: f64 = rng.gen::<f64>() * dist.total();
    let mut acc = 0.0;
    let mut last_nonzero = 0;
    for (y, p) in dist.probs.iter().enumerate() {
        if *p > 0.0 {
            last_nonzero = y;
        }
        acc += p;
        if u < acc {
            return y as u64;
        }
    }
    last_nonzero as u64
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContinuedFraction {
    pub quotients: Vec<u64>,
    /// `(g_u, h_u)` numerator/denominator pairs in lowest terms.
    pub convergents: Vec<(u64, u64)>,
}

impl fmt::Display for ContinuedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let q = &self.quotients;
        write!(f, "[{}", q[0])?;
        if q.len() > 1 {
            let rest: Vec<String> = q[1..].iter().map(u64::to_string).collect();
            write!(f, "; {}", rest.join(", "))?;
        }
        f.write_str("]")
    }
}

/// Euclidean expansion of `y/N` with its convergents.
pub fn continued_fraction(y: u64, big_n: u64) -> Result<ContinuedFraction> {
    if big_n == 0 {
        return Err(Error::domain("denominator must be positive"));
    }
    let (mut num, mut den) = (y as u128, big_n as u128);
    let mut quotients = Vec::new();
    let mut convergents = Vec::new();
    // g_{-2}=0, g_{-1}=1; h_{-2}=1, h_{-1}=0
    let (mut g_prev2, mut g_prev) = (0u128, 1u128);
    let (mut h_prev2, mut h_prev) = (1u128, 0u128);
    loop {
        let a = num / den;
        quotients.push(a as u64);
        let g = a * g_prev + g_prev2;
        let h = a * h_prev + h_prev2;
        convergents.push((g as u64, h as u64));
        (g_prev2, g_prev, h_prev2, h_prev) = (g_prev, g, h_prev, h);
        let r = num % den;
        if r == 0 {
            break;
        }
        num = den;
        den = r;
    }
    Ok(ContinuedFraction { quotients, convergents })
}

/// Largest multiple of a convergent denominator tried as a period candidate.
pub const CANDIDATE_MULTIPLES: u64 = 4;

fn reduce_to_order(a: u64, candidate: u64, n: u64) -> Result<u64> {
    let mut p = candidate;
    if p < 2 {
        return Ok(p);
    }
    for (f, _) in modnum::factorize(p as i128)?.factors() {
        let f = *f as u64;
        while p.is_multiple_of(f) && modnum::mod_pow(a as i128, (p / f) as i128, n as i128)?.into_value() == 1 {
            p /= f;
        }
    }
    Ok(p)
}

/// Reads a period off the convergents of `y/N`.
///
/// Each denominator `h` is tried, then `c·h` for `c ≤ 4` when `h ≥ 2`, and
/// the first candidate with `a^cand ≡ 1 (mod n)` is reduced to the exact
/// multiplicative order.
pub fn recover_period(y: u64, big_n: u64, a: u64, n: u64) -> Result<Option<u64>> {
    Ok(recover_period_traced(y, big_n, a, n)?.1)
}

fn recover_period_traced(y: u64, big_n: u64, a: u64, n: u64) -> Result<(ContinuedFraction, Option<u64>)> {
    let cf = continued_fraction(y, big_n)?;
    for &(_, h) in &cf.convergents {
        if h == 0 {
            continue;
        }
        let max_c = if h >= 2 { CANDIDATE_MULTIPLES } else { 1 };
        for c in 1..=max_c {
            let cand = c * h;
            if modnum::mod_pow(a as i128, cand as i128, n as i128)?.into_value() == 1 % n as i128 {
                return Ok((cf, Some(reduce_to_order(a, cand, n)?)));
            }
        }
    }
    Ok((cf, None))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AttemptOutcome {
    /// `gcd(a, n)` was already a proper divisor.
    GcdShortcut(u64),
    /// No convergent denominator verified as a period.
    NoCandidate,
    OddPeriod(u64),
    /// Even period, but both `gcd(a^{p/2} ± 1, n)` were trivial.
    BadGcd { period: u64, gcds: (u64, u64) },
    Success { period: u64, divisor: u64, gcds: (u64, u64) },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShorAttempt {
    pub a: u64,
    pub y: Option<u64>,
    pub convergents: Vec<(u64, u64)>,
    pub outcome: AttemptOutcome,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ShorTrace {
    pub attempts: Vec<ShorAttempt>,
}

impl fmt::Display for ShorAttempt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a = {}", self.a)?;
        if let Some(y) = self.y {
            let convs: Vec<String> = self.convergents.iter().map(|(g, h)| format!("{g}/{h}")).collect();
            write!(f, ", y = {y}, convergents [{}]", convs.join(", "))?;
        }
        match &self.outcome {
            AttemptOutcome::GcdShortcut(d) => write!(f, ": gcd(a, n) = {d}"),
            AttemptOutcome::NoCandidate => write!(f, ": no period candidate verified"),
            AttemptOutcome::OddPeriod(p) => write!(f, ": period {p} is odd, retry"),
            AttemptOutcome::BadGcd { period, gcds } => {
                write!(f, ": period {period}, gcds {} and {} are trivial", gcds.0, gcds.1)
            }
            AttemptOutcome::Success { period, divisor, gcds } => {
                write!(f, ": period {period}, gcds {} and {} -> divisor {divisor}", gcds.0, gcds.1)
            }
        }
    }
}

/// Error returned when every round fails; carries the full trace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShorFailure {
    pub error: Error,
    pub trace: ShorTrace,
}

impl fmt::Display for ShorFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.error.fmt(f)
    }
}

impl std::error::Error for ShorFailure {}

pub const DEFAULT_MAX_ROUNDS: usize = 64;

/// Finds a proper divisor of `n`.
pub fn shor_factor(n: u64, rng: &mut impl Rng, max_rounds: usize) -> Result<(u64, ShorTrace), ShorFailure> {
    let fail = |error: Error, trace: ShorTrace| ShorFailure { error, trace };
    let mut trace = ShorTrace::default();
    if n < 3 {
        return Err(fail(Error::domain(format!("cannot factor {n}")), trace));
    }
    if n.is_multiple_of(2) {
        return Ok((2, trace));
    }
    let mut cache: HashMap<u64, MeasurementDistribution> = HashMap::new();
    for _ in 0..max_rounds {
        let a = rng.gen_range(2..n);
        let g = modnum::gcd(a as i128, n as i128).map_err(|e| fail(e, trace.clone()))? as u64;
        if g != 1 {
            trace.attempts.push(ShorAttempt { a, y: None, convergents: vec![], outcome: AttemptOutcome::GcdShortcut(g) });
            return Ok((g, trace));
        }
        let dist = match cache.get(&a) {
            Some(d) => d,
            None => {
                let d = simulate_quantum_part(a, n).map_err(|e| fail(e, trace.clone()))?;
                cache.entry(a).or_insert(d)
            }
        };
        let y = sample_measurement(dist, rng);
        let (cf, period) = recover_period_traced(y, dist.register(), a, n).map_err(|e| fail(e, trace.clone()))?;
        let outcome = match period {
            None => AttemptOutcome::NoCandidate,
            Some(p) if p % 2 == 1 => AttemptOutcome::OddPeriod(p),
            Some(p) => {
                let half = modnum::mod_pow(a as i128, (p / 2) as i128, n as i128)
                    .map_err(|e| fail(e, trace.clone()))?
                    .into_value();
                let g1 = modnum::gcd((half - 1).rem_euclid(n as i128), n as i128).unwrap_or(n as i128) as u64;
                let g2 = modnum::gcd((half + 1) % n as i128, n as i128).unwrap_or(n as i128) as u64;
                match [g1, g2].into_iter().find(|d| *d != 1 && *d != n) {
                    Some(d) => AttemptOutcome::Success { period: p, divisor: d, gcds: (g1, g2) },
                    None => AttemptOutcome::BadGcd { period: p, gcds: (g1, g2) },
                }
            }
        };
        let divisor = match outcome {
            AttemptOutcome::Success { divisor, .. } => Some(divisor),
            _ => None,
        };
        trace.attempts.push(ShorAttempt { a, y: Some(y), convergents: cf.convergents, outcome });
        if let Some(d) = divisor {
            return Ok((d, trace));
        }
    }
    Err(fail(Error::GaveUp(max_rounds), trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn register_sizes() {
        assert_eq!(register_size(15).unwrap(), 256);
        assert_eq!(register_size(5).unwrap(), 32);
        assert_eq!(register_size(4).unwrap(), 16);
        assert_eq!(register_size(2773).unwrap(), 1 << 23);
        assert!(register_size(2).is_err());
        for n in 3..500u64 {
            let size = register_size(n).unwrap();
            assert!(n * n <= size && size < 2 * n * n);
        }
    }

    #[test]
    fn period_dividing_register_gives_exact_peaks() {
        let d = simulate_quantum_part(7, 15).unwrap();
        assert_eq!(d.register(), 256);
        assert_eq!(d.support(1e-12), [0, 64, 128, 192]);
        for y in [0, 64, 128, 192] {
            assert!((d.probs()[y] - 0.25).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_bases() {
        assert!(matches!(simulate_quantum_part(6, 15), Err(Error::NotPeriodic { .. })));
        assert!(simulate_quantum_part(1, 15).is_err());
        assert!(simulate_quantum_part(15, 15).is_err());
    }

    #[test]
    fn sampling_point_mass_and_determinism() {
        let mut probs = vec![0.0; 8];
        probs[5] = 1.0;
        let d = MeasurementDistribution::from_probs(probs).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!((0..100).all(|_| sample_measurement(&d, &mut rng) == 5));

        let d = simulate_quantum_part(2, 21).unwrap();
        let draw = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..50).map(|_| sample_measurement(&d, &mut rng)).collect::<Vec<_>>()
        };
        assert_eq!(draw(9), draw(9));
    }

    fn empirical_check(d: &MeasurementDistribution, seed: u64, sigmas: f64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let draws = 100_000;
        let mut counts = vec![0u32; d.register() as usize];
        for _ in 0..draws {
            counts[sample_measurement(d, &mut rng) as usize] += 1;
        }
        for (y, p) in d.probs().iter().enumerate() {
            let expected = p * draws as f64;
            let sigma = (draws as f64 * p * (1.0 - p)).sqrt();
            assert!(
                (counts[y] as f64 - expected).abs() <= sigmas * sigma + 1.0,
                "y = {y}: {} vs {expected}",
                counts[y]
            );
        }
    }

    #[test]
    fn sampling_frequencies_track_probabilities() {
        empirical_check(&simulate_quantum_part(7, 15).unwrap(), 2024, 3.0);
        // 128 outcomes carry mass here; widen the per-bin bound accordingly
        empirical_check(&simulate_quantum_part(2, 11).unwrap(), 2024, 4.5);
    }

    #[test]
    fn continued_fraction_examples() {
        let cf = continued_fraction(192, 256).unwrap();
        assert_eq!(cf.quotients, [0, 1, 3]);
        assert_eq!(cf.convergents, [(0, 1), (1, 1), (3, 4)]);
        assert_eq!(cf.to_string(), "[0; 1, 3]");
        let cf = continued_fraction(0, 77).unwrap();
        assert_eq!(cf.quotients, [0]);
        assert_eq!(cf.convergents, [(0, 1)]);
        // last convergent is y/N in lowest terms
        for (y, n) in [(85u64, 256u64), (171, 512), (1, 3), (1000, 1000)] {
            let last = *continued_fraction(y, n).unwrap().convergents.last().unwrap();
            let g = modnum::gcd(y as i64, n as i64).unwrap() as u64;
            assert_eq!(last, (y / g, n / g));
        }
    }

    #[test]
    fn convergents_obey_recurrence() {
        let cf = continued_fraction(12_345, 65_536).unwrap();
        for i in 2..cf.convergents.len() {
            let a = cf.quotients[i];
            let (g2, h2) = cf.convergents[i - 2];
            let (g1, h1) = cf.convergents[i - 1];
            assert_eq!(cf.convergents[i], (a * g1 + g2, a * h1 + h2));
        }
    }

    #[test]
    fn recover_period_examples() {
        assert_eq!(recover_period(192, 256, 7, 15).unwrap(), Some(4));
        assert_eq!(recover_period(0, 256, 7, 15).unwrap(), None);
        assert_eq!(recover_period(64, 256, 7, 15).unwrap(), Some(4));
        assert_eq!(recover_period(128, 256, 7, 15).unwrap(), Some(4));
    }

    #[test]
    fn even_numbers_short_circuit() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let (d, trace) = shor_factor(14, &mut rng, 10).unwrap();
        assert_eq!(d, 2);
        assert!(trace.attempts.is_empty());
    }

    #[test]
    fn factors_small_semiprimes() {
        for (n, divisors) in [(15u64, [3u64, 5]), (21, [3, 7]), (33, [3, 11])] {
            let mut rng = ChaCha8Rng::seed_from_u64(n);
            let (d, trace) = shor_factor(n, &mut rng, 100).unwrap();
            assert!(divisors.contains(&d), "{n} -> {d}");
            assert!(!trace.attempts.is_empty());
            for att in &trace.attempts {
                assert!(att.a > 1 && att.a < n);
            }
        }
    }

    #[test]
    fn gives_up_on_primes() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let err = shor_factor(13, &mut rng, 5).unwrap_err();
        assert_eq!(err.error, Error::GaveUp(5));
        assert_eq!(err.trace.attempts.len(), 5);
    }
}
