// One line per acceptance criterion; run with `--nocapture` to see them.

#[path = "../../core/tests/support/oracle.rs"]
mod oracle;

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::thread;
use std::time::{Duration, Instant};

use qsafe_channel::pipe::pipe_pair;
use qsafe_channel::{handshake_client, handshake_server, ChannelError, HandshakeMode, ServerKeys};
use qsafe_core::agility::{mosca_evaluate, MoscaInput};
use qsafe_core::lattice::*;
use qsafe_core::scalar::{Rational, Scalar};
use qsafe_core::xof::seeded_stream;
use qsafe_core::{dilithium, kyber, modnum, rsa, shor, IntPoly};
use rand::Rng;
use rand_chacha::ChaCha20Rng;

type Check = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn timed(limit: Duration, f: impl FnOnce() -> Check) -> Check {
    let start = Instant::now();
    let detail = f()?;
    let took = start.elapsed();
    ensure!(took < limit, "took {took:.2?}, limit {limit:?}");
    Ok(format!("{detail} [{took:.2?}]"))
}

// 1
fn rsa_golden() -> Check {
    timed(Duration::from_secs(1), || {
        let (public, private) = rsa::rsa_keygen(47, 59, 157).map_err(|e| e.to_string())?;
        ensure!((public.d, public.n) == (17, 2773), "public key ({}, {})", public.d, public.n);
        let text = "ITS ALL GREEK TO ME";
        let m = rsa::encode_text(text, 2773).map_err(|e| e.to_string())?;
        let want = [920, 1900, 112, 1200, 718, 505, 1100, 2015, 13, 500];
        ensure!(m.blocks == want, "encoded {:?}", m.blocks);
        let c = rsa::rsa_encrypt(&m, &public).map_err(|e| e.to_string())?;
        ensure!(c.blocks[..2] == [948, 2342], "first blocks {:?}", &c.blocks[..2]);
        let back = rsa::decode_text(&rsa::rsa_decrypt(&c, &private).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        ensure!(back == text, "decrypted {back:?}");
        Ok("public (17, 2773), blocks 0948 2342, message restored".into())
    })
}

// 2
fn number_theory_goldens() -> Check {
    timed(Duration::from_secs(1), || {
        let e = |e: qsafe_core::Error| e.to_string();
        ensure!(modnum::gcd(63i64, 17).map_err(e)? == 1, "gcd");
        let cert = modnum::bezout(63i64, 17).map_err(e)?;
        ensure!(cert.holds() && cert.accepts(-7, 26), "bezout certificate");
        ensure!(*modnum::mod_inverse(157i64, 2668).map_err(e)?.value() == 17, "inverse");
        ensure!(*modnum::mod_reduce(39i64 * 99 + 95 * 64, 19).map_err(e)?.value() == 4, "sum mod 19");
        ensure!(*modnum::mod_reduce(129_537i64, 9).map_err(e)?.value() == 0, "129537 mod 9");
        ensure!(modnum::period(2i64, 5).map_err(e)? == 4, "period");
        ensure!(modnum::discrete_log(2i64, 5, 11).map_err(e)? == 4, "discrete log");
        Ok("gcd, bezout (-7, 26), inverse 17, residues 4 and 0, period 4, dlog 4".into())
    })
}

// 3
fn polynomial_division() -> Check {
    let p = IntPoly::new(vec![-1, 0, 1, 2, -1, 4]);
    let f = IntPoly::new(vec![1, 0, 1]);
    let (q, r) = p.divmod(&f).map_err(|e| e.to_string())?;
    ensure!(q.coeffs() == [2, -2, -1, 4] && r.coeffs() == [-3, 2], "got {q} rem {r}");
    ensure!(q.mul(&f).add(&r) == p, "reconstruction");
    Ok(format!("quotient {q}, remainder {r}"))
}

// 4
fn kyber_toy_golden() -> Check {
    use kyber::worked::*;
    const Q: i64 = 7;
    const N: usize = 4;
    let v2 = |v: &[[i64; 4]; 2]| v.iter().map(|c| c.to_vec()).collect::<Vec<_>>();
    let a: Vec<Vec<Vec<i64>>> = A.iter().map(|row| row.iter().map(|c| c.to_vec()).collect()).collect();
    let (s, e, r, e1) = (v2(&S), v2(&E), v2(&R), v2(&E1));
    let m_scaled = vec![4, 0, 0, 4];

    let t_o: Vec<Vec<i64>> =
        oracle::matvec(&a, &s, N, Q).iter().zip(&e).map(|(x, y)| oracle::add(x, y, Q)).collect();
    let u_o: Vec<Vec<i64>> =
        oracle::matvec(&oracle::transpose(&a), &r, N, Q).iter().zip(&e1).map(|(x, y)| oracle::add(x, y, Q)).collect();
    let v_o = oracle::add(&oracle::add(&oracle::dot(&t_o, &r, N, Q), &E2, Q), &m_scaled, Q);
    let mhat_o = oracle::sub(&v_o, &oracle::dot(&s, &u_o, N, Q), Q);
    let noise_o = oracle::sub(&oracle::add(&oracle::dot(&e, &r, N, Q), &E2, Q), &oracle::dot(&s, &e1, N, Q), Q);

    let (pk, sk) = keys();
    let ct = kyber::encrypt(&pk, &[1, 0, 0, 1], &randomness()).map_err(|e| e.to_string())?;
    let lib = |c: &[u64]| c.iter().map(|x| *x as i64).collect::<Vec<_>>();
    for i in 0..2 {
        ensure!(oracle::norm(&PUBLISHED_T[i], Q) == lib(pk.t.get(i).coeffs()), "t[{i}] differs from printed");
        ensure!(oracle::norm(&PUBLISHED_U[i], Q) == lib(ct.u.get(i).coeffs()), "u[{i}] differs from printed");
        ensure!(t_o[i] == lib(pk.t.get(i).coeffs()) && u_o[i] == lib(ct.u.get(i).coeffs()), "oracle t/u [{i}]");
    }
    ensure!(lib(ct.v.coeffs()) == v_o, "v disagrees with oracle");
    let mhat = kyber::decrypt_raw(&sk, &ct).map_err(|e| e.to_string())?;
    ensure!(lib(mhat.coeffs()) == mhat_o, "m_hat disagrees with oracle");
    let noise = kyber::noise_term(&sk, &vector(&E), &randomness()).map_err(|e| e.to_string())?;
    ensure!(lib(noise.coeffs()) == noise_o, "noise disagrees with oracle");
    ensure!(oracle::add(&m_scaled, &noise_o, Q) == mhat_o, "m_hat != scaled m + noise");

    // erratum: the printed v and m_hat are not what the printed inputs produce
    let v_printed = oracle::norm(&PUBLISHED_V, Q);
    let m_printed = oracle::norm(&PUBLISHED_M_HAT, Q);
    ensure!(v_printed != v_o && m_printed != mhat_o, "expected the printed v/m_hat to differ");
    let decoded = kyber::decrypt(&sk, &ct).map_err(|e| e.to_string())?;
    let artifact = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("kyber-toy-erratum.txt");
    let table = format!(
        "value  printed(mod 7)  recomputed\nv      {v_printed:?}  {v_o:?}\nm_hat  {m_printed:?}  {mhat_o:?}\n\
         bits   [1, 0, 0, 1]  {decoded:?}\nnoise  {:?}\n",
        oracle::centered(&noise_o, Q)
    );
    std::fs::write(&artifact, table).map_err(|e| e.to_string())?;
    Ok(format!(
        "t, u match print mod 7; erratum: v printed {v_printed:?} vs oracle {v_o:?}, m_hat printed {m_printed:?} \
         vs oracle {mhat_o:?}, decrypts to {decoded:?}; written to {}",
        artifact.display()
    ))
}

// 5
fn kyber_correctness() -> Check {
    timed(Duration::from_secs(60), || {
        let params = kyber::TOY;
        let mut rng = seeded_stream(5, "acceptance-toy");
        let (mut small, mut failures_when_small, mut failures) = (0usize, 0usize, 0usize);
        for _ in 0..100_000 {
            let tr = kyber::keygen_transcript(&params, &mut rng);
            let rand = kyber::EncryptionRandomness::sample(&params, &mut rng);
            let m: Vec<u8> = (0..params.n).map(|_| rng.gen_range(0..2)).collect();
            let ct = kyber::encrypt(&tr.public, &m, &rand).map_err(|e| e.to_string())?;
            let noise = kyber::noise_term(&tr.private, &tr.e, &rand).map_err(|e| e.to_string())?;
            let ok = kyber::decrypt(&tr.private, &ct).map_err(|e| e.to_string())? == m;
            if 4 * noise.inf_norm() < params.q {
                small += 1;
                failures_when_small += usize::from(!ok);
            }
            failures += usize::from(!ok);
        }
        ensure!(failures_when_small == 0, "{failures_when_small} failures below q/4");

        let mut slowest = Duration::ZERO;
        for (params, seed) in [(kyber::KYBER512, 51), (kyber::KYBER768, 52)] {
            let mut rng = seeded_stream(seed, "acceptance-round-trip");
            for i in 0..1000 {
                let start = Instant::now();
                let (pk, sk) = kyber::keygen(&params, &mut rng);
                let m: Vec<u8> = (0..params.n).map(|_| rng.gen_range(0..2)).collect();
                let rand = kyber::EncryptionRandomness::sample(&params, &mut rng);
                let ct = kyber::encrypt(&pk, &m, &rand).map_err(|e| e.to_string())?;
                ensure!(kyber::decrypt(&sk, &ct).map_err(|e| e.to_string())? == m, "{params} trial {i} failed");
                slowest = slowest.max(start.elapsed());
            }
        }
        ensure!(slowest < Duration::from_secs(5), "slowest round trip {slowest:?}");
        Ok(format!(
            "toy: {small}/100000 below q/4 all decrypt ({failures} failures above); 512 and 768: 2000/2000, slowest {slowest:.2?}"
        ))
    })
}

// 6
fn dilithium_checks() -> Check {
    let mut rng = seeded_stream(6, "acceptance-dilithium");
    let random_message = |rng: &mut ChaCha20Rng| -> Vec<u8> { (0..rng.gen_range(1..48)).map(|_| rng.gen()).collect() };
    for params in [dilithium::TOY, dilithium::LEVEL2] {
        let (pk, sk) = dilithium::keygen(&params, &mut rng);
        for i in 0..200 {
            let msg = random_message(&mut rng);
            let sig = dilithium::sign(&sk, &pk, &msg, &mut rng).map_err(|e| e.to_string())?;
            ensure!(dilithium::verify(&pk, &msg, &sig), "{params} round trip {i}");
            let c = &sig.c.elem().centered();
            ensure!(c.iter().filter(|x| **x != 0).count() == params.h, "challenge weight");
            ensure!(c.iter().all(|x| x.abs() <= 1), "challenge entries");
        }
    }
    let params = dilithium::LEVEL2;
    let (pk, sk) = dilithium::keygen(&params, &mut rng);
    let (other_pk, other_sk) = dilithium::keygen(&params, &mut rng);
    for i in 0..200 {
        let mut msg = random_message(&mut rng);
        let sig = dilithium::sign(&sk, &pk, &msg, &mut rng).map_err(|e| e.to_string())?;
        let foreign = dilithium::sign(&other_sk, &other_pk, &msg, &mut rng).map_err(|e| e.to_string())?;
        ensure!(!dilithium::verify(&pk, &msg, &foreign), "wrong key {i} accepted");
        let at = rng.gen_range(0..msg.len());
        msg[at] ^= rng.gen_range(1..=255u8);
        ensure!(!dilithium::verify(&pk, &msg, &sig), "tamper {i} accepted");
    }
    for i in 0..2000u32 {
        let c = dilithium::hash_to_ball(&i.to_be_bytes(), &params).elem().centered();
        ensure!(c.iter().filter(|x| **x != 0).count() == params.h && c.iter().all(|x| x.abs() <= 1), "psi {i}");
    }

    // e = 0: A r2 - t c = A r1
    let toy = dilithium::TOY;
    let a = qsafe_core::polyring::RingMat::from_fn(toy.m, toy.k, |_, _| kyber::sample_uniform(toy.n, toy.q, &mut rng))
        .map_err(|e| e.to_string())?;
    let small = |rng: &mut ChaCha20Rng, len: usize| {
        let entries = (0..len)
            .map(|_| {
                let c: Vec<i64> = (0..toy.n).map(|_| kyber::sample_cbd(toy.eta, rng)).collect();
                qsafe_core::polyring::RingElem::from_signed(toy.n, toy.q, &c).unwrap()
            })
            .collect();
        qsafe_core::polyring::RingVec::new(entries).unwrap()
    };
    let s = small(&mut rng, toy.k);
    let zero = qsafe_core::polyring::RingVec::zero(toy.m, toy.n, toy.q);
    let (pk, sk) = dilithium::keygen_from(&toy, s, a, &zero).map_err(|e| e.to_string())?;
    for _ in 0..100 {
        let r1 = small(&mut rng, toy.k);
        let c = dilithium::hash_to_ball(&rng.gen::<[u8; 8]>(), &toy);
        let r2 = r1.add(&sk.s.mul_elem(c.elem()).unwrap()).unwrap();
        let point = dilithium::verification_point(&pk, &dilithium::DilithiumSignature { r2, c }).unwrap();
        ensure!(point == pk.a.matvec(&r1).unwrap(), "cancellation identity");
    }
    Ok("400 round trips, 200 tampers and 200 foreign keys rejected, challenge weights exact, e=0 identity".into())
}

fn closed_form(period: u64, register: u64, class_size: u64, y: u64) -> f64 {
    let n = register as f64;
    let a = class_size as f64;
    let k = (period * y) % register;
    if k == 0 {
        return a / n;
    }
    let phase = 2.0 * PI * k as f64 / n;
    (2.0 - 2.0 * (phase * a).cos()) / (2.0 - 2.0 * phase.cos()) / (n * a)
}

// 7
fn shor_checks() -> Check {
    let mut worst: f64 = 0.0;
    for n in 3..=40u64 {
        for a in (2..n).filter(|a| modnum::gcd(*a as i64, n as i64).unwrap() == 1) {
            let d = shor::simulate_quantum_part(a, n).map_err(|e| e.to_string())?;
            worst = worst.max((d.total() - 1.0).abs());
        }
    }
    ensure!(worst < 1e-9, "normalization error {worst}");
    let d = shor::simulate_quantum_part(7, 15).map_err(|e| e.to_string())?;
    ensure!(d.support(1e-12) == [0, 64, 128, 192], "support {:?}", d.support(1e-12));

    let mut rng = seeded_stream(7, "acceptance-shor");
    for n in [15u64, 21, 33] {
        let (f, _) = shor::shor_factor(n, &mut rng, 100).map_err(|e| e.to_string())?;
        ensure!(f > 1 && f < n && n % f == 0, "{n} -> {f}");
    }

    let mut compared = 0;
    for n in [15u64, 21, 33, 35] {
        for a in (2..n).filter(|a| modnum::gcd(*a as i64, n as i64).unwrap() == 1) {
            let p = modnum::period(a as i64, n as i64).unwrap() as u64;
            let mut beta = 1;
            for _ in 0..p {
                let (class_size, probs) = shor::conditional_distribution(a, n, beta).map_err(|e| e.to_string())?;
                for (y, got) in probs.iter().enumerate() {
                    let want = closed_form(p, probs.len() as u64, class_size as u64, y as u64);
                    ensure!((got - want).abs() < 1e-6, "a={a} n={n} y={y}: {got} vs {want}");
                    compared += 1;
                }
                beta = beta * a % n;
            }
        }
    }
    Ok(format!("normalized within {worst:.1e}, 7 mod 15 support exact, 15/21/33 factored, {compared} closed-form points"))
}

fn random_basis(rng: &mut ChaCha20Rng, n: usize, range: i64) -> Vec<Vec<i64>> {
    loop {
        let vs: Vec<Vec<i64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(-range..=range)).collect()).collect();
        if Basis::<Rational>::from_ints(&vs).is_ok() {
            return vs;
        }
    }
}

// Integer exhaustive search over the box [-m, m]^n, lexicographic tie order.
fn exhaustive(vs: &[Vec<i64>], target: Option<&[i64]>, m: i64) -> (i64, Vec<i64>) {
    let n = vs.len();
    let side = 2 * m + 1;
    let mut best: Option<(i64, Vec<i64>)> = None;
    for idx in 0..side.pow(n as u32) {
        let mut rest = idx;
        let mut g = vec![0i64; n];
        for gi in g.iter_mut().rev() {
            *gi = rest % side - m;
            rest /= side;
        }
        if target.is_none() && g.iter().all(|x| *x == 0) {
            continue;
        }
        let point: Vec<i64> = (0..n).map(|d| (0..n).map(|i| g[i] * vs[i][d]).sum()).collect();
        let dist = point.iter().enumerate().map(|(d, x)| (x - target.map_or(0, |t| t[d])).pow(2)).sum();
        if best.as_ref().is_none_or(|(b, _)| dist < *b) {
            best = Some((dist, point));
        }
    }
    best.unwrap()
}

// 8
fn lattice_checks() -> Check {
    let err = |e: qsafe_core::Error| e.to_string();
    let mut rng = seeded_stream(8, "acceptance-lattice");
    for n in 1..=4 {
        ensure!((Basis::<Rational>::identity(n).defect() - 1.0).abs() < 1e-9, "identity defect");
    }
    for i in 0..100 {
        let b = Basis::<Rational>::from_ints(&random_basis(&mut rng, 2 + i % 3, 7)).map_err(err)?;
        ensure!(b.defect() >= 1.0 - 1e-12, "defect {}", b.defect());
    }

    let ints = |v: &[Rational]| v.iter().map(|x| x.to_int().unwrap()).collect::<Vec<i64>>();
    for trial in 0..10 {
        let n = 2 + trial % 2;
        let vs = random_basis(&mut rng, n, 6);
        let b = Basis::<Rational>::from_ints(&vs).map_err(err)?;
        let (norm, point) = exhaustive(&vs, None, 8);
        let got = svp_bruteforce(&b, 8).map_err(err)?;
        ensure!(got.norm_sq == Rational::from_int(norm) && ints(&got.vector) == point, "svp trial {trial}");
        let target: Vec<i64> = (0..n).map(|_| rng.gen_range(-30..=30)).collect();
        let (dist, point) = exhaustive(&vs, Some(&target), 8);
        let t: Vec<Rational> = target.iter().map(|x| Rational::from_int(*x)).collect();
        let got = cvp_bruteforce(&b, &t, 8).map_err(err)?;
        ensure!(got.norm_sq == Rational::from_int(dist) && ints(&got.vector) == point, "cvp trial {trial}");
    }

    let mut ggh_ok = 0;
    for i in 0..100 {
        let n = 2 + i % 2;
        let good = loop {
            let vs: Vec<Vec<i64>> = (0..n)
                .map(|r| (0..n).map(|c| if r == c { rng.gen_range(6..=9) } else { rng.gen_range(-1..=1) }).collect())
                .collect();
            if Basis::<Rational>::from_ints(&vs).is_ok_and(|b| b.defect() < DEFAULT_MAX_GOOD_DEFECT) {
                break vs;
            }
        };
        let keys = loop {
            if let Ok(k) = ggh_keygen(&good, random_unimodular(n, &mut rng, 8)) {
                break k;
            }
        };
        let m: Vec<i64> = (0..n).map(|_| rng.gen_range(-50..=50)).collect();
        let e: Vec<i64> = (0..n).map(|_| rng.gen_range(-1..=1)).collect();
        let c = ggh_encrypt(&m, &keys.public, &e).map_err(err)?;
        ggh_ok += usize::from(ggh_decrypt(&c, &keys).map_err(err)? == m);
    }
    ensure!(ggh_ok == 100, "ggh {ggh_ok}/100");

    for i in 0..100 {
        let inst = lwe_generate(4 + i % 3, 97, 2, &mut rng).map_err(err)?;
        ensure!(inst.holds() && lwe_embed(&inst).witness_holds(), "witness {i}");
    }

    let mut solved = 0;
    while solved < 100 {
        let inst = lwe_generate(5, 97, 0, &mut rng).map_err(err)?;
        match gauss_solve(&inst.a, &inst.t, inst.q) {
            Ok(s) => {
                ensure!(s == inst.s, "error-free elimination missed the secret");
                solved += 1;
            }
            Err(qsafe_core::Error::Singular) => {}
            Err(e) => return Err(e.to_string()),
        }
    }
    let (mut trials, mut differ) = (0, 0);
    while trials < 100 {
        let inst = lwe_generate(5, 97, 2, &mut rng).map_err(err)?;
        if inst.e.iter().all(|x| *x == 0) {
            continue;
        }
        let Ok(s) = gauss_solve(&inst.a, &inst.t, inst.q) else { continue };
        trials += 1;
        differ += usize::from(s != inst.s);
    }
    ensure!(differ >= 95, "noisy elimination differed on only {differ}/100");
    Ok(format!("defects ok, 10 svp/cvp match, ggh 100/100, 100 witnesses, gauss 100 exact and {differ}/100 noisy misses"))
}

// 9
fn channel_checks() -> Check {
    let params = kyber::KYBER512;
    for mode in [HandshakeMode::KemOnly, HandshakeMode::Hybrid] {
        for seed in 0..100u64 {
            let keys = ServerKeys::generate(&params, true, &mut seeded_stream(seed, "acceptance-server"));
            let (mut c, mut s) = pipe_pair();
            let server = thread::spawn(move || handshake_server(&mut s, &keys, mode).map(|x| *x.shared_key()));
            let client = handshake_client(&mut c, &params, mode, &mut seeded_stream(seed, "acceptance-client"))
                .map_err(|e| e.to_string())?;
            let server = server.join().unwrap().map_err(|e| e.to_string())?;
            ensure!(*client.shared_key() == server, "{mode:?} seed {seed}: keys differ");
        }
    }

    let mutated = mutation_sweep(&params)?;

    let keys = ServerKeys::generate(&params, true, &mut seeded_stream(9, "acceptance-server"));
    let (mut c, mut s) = pipe_pair();
    let server = thread::spawn(move || handshake_server(&mut s, &keys, HandshakeMode::Hybrid));
    let mut client = handshake_client(&mut c, &params, HandshakeMode::Hybrid, &mut seeded_stream(9, "acceptance-client"))
        .map_err(|e| e.to_string())?;
    let mut server = server.join().unwrap().map_err(|e| e.to_string())?;
    let f1 = client.seal(b"one").map_err(|e| e.to_string())?;
    let f2 = client.seal(b"two").map_err(|e| e.to_string())?;
    let mut bad = f1.clone();
    let last = bad.payload.len() - 1;
    bad.payload[last] ^= 1;
    ensure!(matches!(server.open(&bad), Err(ChannelError::AuthFailure)), "tamper not detected");
    ensure!(server.open(&f1).map_err(|e| e.to_string())? == b"one", "open");
    ensure!(server.open(&f2).map_err(|e| e.to_string())? == b"two", "open");
    ensure!(matches!(server.open(&f1), Err(ChannelError::ReplayError { .. })), "replay not detected");
    Ok(format!("200 loopbacks agree, {mutated} single-bit mutations all change the key or abort, tamper and replay caught"))
}

fn mutation_sweep(params: &kyber::KyberParams) -> Result<usize, String> {
    use qsafe_channel::{ClientPending, Frame, ServerPending};
    let mut checked = 0;
    for mode in [HandshakeMode::KemOnly, HandshakeMode::Hybrid] {
        let keys = ServerKeys::generate(params, true, &mut seeded_stream(90, "acceptance-server"));
        let client_rng = || seeded_stream(90, "acceptance-client");
        let (cp, hello) = ClientPending::start(params, mode);
        let (sp, pubkey) = ServerPending::on_hello(&keys, mode, &hello).map_err(|e| e.to_string())?;
        let (client, encap) = cp.on_pubkey(&pubkey, &mut client_rng()).map_err(|e| e.to_string())?;
        let key = *sp.on_encap(&encap).map_err(|e| e.to_string())?.shared_key();
        ensure!(key == *client.shared_key(), "honest run disagrees");
        let frames = [hello.to_bytes(), pubkey.to_bytes(), encap.to_bytes()];

        for which in 0..3 {
            for pos in 0..frames[which].len() {
                for mask in (0..8).map(|b| 1u8 << b) {
                    let mut bytes = frames[which].clone();
                    bytes[pos] ^= mask;
                    let run = || -> Option<([u8; 32], [u8; 32])> {
                        let pick = |i: usize| if i == which { bytes.clone() } else { frames[i].clone() };
                        let (cp, _) = ClientPending::start(params, mode);
                        let (sp, sent) = ServerPending::on_hello(&keys, mode, &Frame::parse(&pick(0)).ok()?).ok()?;
                        let delivered = if which == 1 { Frame::parse(&bytes).ok()? } else { sent };
                        let (client, encap) = cp.on_pubkey(&delivered, &mut client_rng()).ok()?;
                        let encap = if which == 2 { Frame::parse(&bytes).ok()? } else { encap };
                        let server = sp.on_encap(&encap).ok()?;
                        Some((*client.shared_key(), *server.shared_key()))
                    };
                    if let Some((ck, sk)) = run() {
                        ensure!(ck != key || sk != key, "frame {which} byte {pos} mask {mask:#x}: key unchanged");
                        ensure!(ck != sk, "frame {which} byte {pos} mask {mask:#x}: both sides agree");
                    }
                    checked += 1;
                }
            }
        }
    }
    Ok(checked)
}

// 10
fn mosca_scenarios() -> Check {
    let rows = [((5.0, 10.0, 12.0), "slack -3 AT_RISK"), ((2.0, 3.0, 10.0), "slack 5 SAFE"), ((1.0, 12.0, 10.0), "slack -3 AT_RISK IN_TROUBLE")];
    let mut seen = Vec::new();
    for ((m, c, q), want) in rows {
        let v = mosca_evaluate(&MoscaInput::new(m, c, q).map_err(|e| e.to_string())?);
        ensure!(v.to_string() == want, "({m}, {c}, {q}) gave {v}, want {want}");
        seen.push(v.to_string());
    }
    Ok(seen.join("; "))
}

const DEMOS: &[&[&str]] = &[
    &["numtheory", "demo"],
    &["rsa", "demo"],
    &["ecc", "demo"],
    &["ecc", "demo", "--curve", "p10007"],
    &["shor", "demo"],
    &["shor", "factor", "21"],
    &["lattice", "demo"],
    &["kyber", "demo"],
    &["kyber", "demo", "--params", "512"],
    &["dilithium", "demo"],
    &["dilithium", "demo", "--params", "2"],
    &["hybrid", "--mode", "c-then-q"],
    &["hybrid", "--mode", "q-then-c", "--classical", "rsa"],
    &["hybrid", "--mode", "parallel"],
    &["mosca", "--migrate", "5", "--confi", "10", "--crqc", "12"],
];

fn run_cli(args: &[&str], seed: &str) -> (i32, Vec<u8>, Vec<u8>) {
    let mut argv = vec!["qsafe", "--seed", seed, "--trace"];
    argv.extend_from_slice(args);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = qsafe::run(argv, &mut std::io::empty(), &mut out, &mut err);
    (code, out, err)
}

// 11
fn determinism() -> Check {
    let mut differs_across_seeds = 0;
    for demo in DEMOS {
        let first = run_cli(demo, "1234");
        ensure!(first.0 == 0, "{demo:?} exited {}: {}", first.0, String::from_utf8_lossy(&first.2));
        ensure!(first == run_cli(demo, "1234"), "{demo:?} is not reproducible");
        differs_across_seeds += usize::from(first.1 != run_cli(demo, "4321").1);
    }
    Ok(format!("{} demo invocations byte-identical; {differs_across_seeds} vary with the seed", DEMOS.len()))
}

#[test]
fn acceptance_criteria() {
    let criteria: [(&str, fn() -> Check); 11] = [
        ("RSA golden path", rsa_golden),
        ("number theory goldens", number_theory_goldens),
        ("polynomial division golden", polynomial_division),
        ("Kyber toy golden", kyber_toy_golden),
        ("Kyber correctness", kyber_correctness),
        ("Dilithium", dilithium_checks),
        ("Shor simulation", shor_checks),
        ("lattice", lattice_checks),
        ("channel", channel_checks),
        ("Mosca scenarios", mosca_scenarios),
        ("determinism", determinism),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.into_iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        match outcome {
            Ok(detail) => println!("PASS criterion {}: {name}: {detail}", i + 1),
            Err(why) => {
                println!("FAIL criterion {}: {name}: {why}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
