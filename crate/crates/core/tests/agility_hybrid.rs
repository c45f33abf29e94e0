use std::sync::OnceLock;

use proptest::prelude::*;
use qsafe_core::agility::{default_registry, hybrid_sign, hybrid_verify, HybridMode, HybridSignature, Registry};
use qsafe_core::xof::seeded_stream;

fn registry() -> &'static Registry {
    static REG: OnceLock<Registry> = OnceLock::new();
    REG.get_or_init(|| default_registry(&mut seeded_stream(11, "hybrid-test")).unwrap())
}

fn mode() -> impl Strategy<Value = HybridMode> {
    prop_oneof![Just(HybridMode::CthenQ), Just(HybridMode::QthenC), Just(HybridMode::Parallel)]
}

fn classical() -> impl Strategy<Value = &'static str> {
    prop_oneof![Just("ecdsa"), Just("rsa")]
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 500, ..ProptestConfig::default() })]

    // target: 0 = message, 1 = first part, 2 = second part
    #[test]
    fn any_corruption_breaks_verification(
        mode in mode(),
        c in classical(),
        msg in proptest::collection::vec(any::<u8>(), 1..64),
        seed in any::<u64>(),
        target in 0usize..3,
        pos in any::<prop::sample::Index>(),
        flip in 1u8..=255,
    ) {
        let reg = registry();
        let mut rng = seeded_stream(seed, "hybrid-sign");
        let h = hybrid_sign(&msg, c, "dilithium", mode, reg, &mut rng).unwrap();
        prop_assert!(hybrid_verify(&msg, &h, reg));

        let mut msg2 = msg.clone();
        let mut h2 = h.clone();
        let buf = match target {
            0 => &mut msg2,
            t => &mut h2.parts[t - 1].1,
        };
        let i = pos.index(buf.len());
        buf[i] ^= flip;
        prop_assert!(!hybrid_verify(&msg2, &h2, reg));
    }
}

#[test]
fn serialized_signature_survives_roundtrip() {
    let reg = registry();
    let mut rng = seeded_stream(3, "hybrid-sign");
    for mode in HybridMode::ALL {
        let h = hybrid_sign(b"roundtrip", "ecdsa", "dilithium", mode, reg, &mut rng).unwrap();
        let back = HybridSignature::from_bytes(&h.to_bytes()).unwrap();
        assert!(hybrid_verify(b"roundtrip", &back, reg));
    }
}

#[test]
fn registry_is_shared_across_threads() {
    let reg = registry();
    std::thread::scope(|s| {
        for t in 0..4u64 {
            s.spawn(move || {
                let mut rng = seeded_stream(t, "threads");
                let h = hybrid_sign(b"shared", "rsa", "dilithium", HybridMode::Parallel, reg, &mut rng).unwrap();
                assert!(hybrid_verify(b"shared", &h, reg));
            });
        }
    });
}
