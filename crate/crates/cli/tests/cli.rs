use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};

struct Run {
    code: i32,
    out: String,
    err: String,
}

fn qsafe(args: &[&str]) -> Run {
    let mut argv = vec!["qsafe"];
    argv.extend_from_slice(args);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = qsafe::run(argv, &mut std::io::empty(), &mut out, &mut err);
    Run { code, out: String::from_utf8(out).unwrap(), err: String::from_utf8(err).unwrap() }
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("qsafe-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn exit_codes() {
    let help = qsafe(&["--help"]);
    assert_eq!(help.code, 0);
    assert!(help.out.contains("Usage"));
    assert_eq!(qsafe(&["frobnicate"]).code, 2);
    assert_eq!(qsafe(&["numtheory", "inverse", "x", "7"]).code, 2);

    let r = qsafe(&["--seed", "1", "numtheory", "inverse", "4", "8"]);
    assert_eq!(r.code, 1);
    assert!(r.err.starts_with("error: "), "{}", r.err);
    assert_eq!(qsafe(&["--seed", "1", "mosca", "--migrate", "-1", "--confi", "1", "--crqc", "1"]).code, 1);
    assert_eq!(qsafe(&["--seed", "1", "kyber", "demo", "--params", "999"]).code, 1);
}

#[test]
fn missing_seed_is_reported() {
    let r = qsafe(&["numtheory", "gcd", "63", "17"]);
    assert_eq!(r.code, 0);
    assert!(r.err.starts_with("seed: "), "{}", r.err);
    assert!(qsafe(&["--seed", "3", "numtheory", "gcd", "63", "17"]).err.is_empty());
}

#[test]
fn rsa_demo_transcript() {
    let r = qsafe(&["--seed", "0", "rsa", "demo"]);
    assert_eq!(r.code, 0);
    assert!(r.out.contains("public key (d, n) = (17, 2773)"));
    assert!(r.out.contains("encoded:   0920 1900 0112 1200 0718 0505 1100 2015 0013 0500"));
    assert!(r.out.contains("block  1: 0920 -> 0948 -> 0920"));
    assert!(r.out.contains("block  2: 1900 -> 2342 -> 1900"));
    assert!(r.out.ends_with("decrypted: ITS ALL GREEK TO ME\n"));
}

#[test]
fn kyber_trace_flags_the_published_discrepancy() {
    let r = qsafe(&["--seed", "0", "--trace", "kyber", "demo"]);
    assert_eq!(r.code, 0);
    let line = |name: &str| r.out.lines().find(|l| l.trim_start().starts_with(&format!("{name}  "))).unwrap().to_string();
    assert!(line("t[0]").ends_with("same mod 7"));
    assert!(line("u[1]").ends_with("same mod 7"));
    assert!(line("v").ends_with("DIFFERS"));
    assert!(r.out.contains("decrypted = 1000"));
    assert!(r.out.contains("|noise|_inf = 3"));
}

#[test]
fn number_theory_commands() {
    let out = |args: &[&str]| {
        let mut a = vec!["--seed", "0", "numtheory"];
        a.extend_from_slice(args);
        qsafe(&a).out
    };
    assert!(out(&["inverse", "157", "2668"]).contains("17"));
    assert!(out(&["dlog", "2", "5", "11"]).contains('4'));
    assert!(out(&["factor", "2773"]).contains("47"));
}

#[test]
fn kyber_key_files_round_trip() {
    let dir = scratch("kyber");
    let (pk, sk, ct, kem) = (dir.join("pk"), dir.join("sk"), dir.join("ct"), dir.join("kem"));
    assert_eq!(qsafe(&["--seed", "4", "kyber", "keygen", "--params", "768", "--public", p(&pk), "--private", p(&sk)]).code, 0);
    assert!(std::fs::read_to_string(&pk).unwrap().starts_with("scheme: kyber-public\nparams: 768\n"));

    let r = qsafe(&["--seed", "5", "kyber", "encrypt", "--public", p(&pk), "--message", "1101", "--out", p(&ct)]);
    assert_eq!(r.code, 0, "{}", r.err);
    let r = qsafe(&["--seed", "5", "kyber", "decrypt", "--private", p(&sk), "--ciphertext", p(&ct)]);
    assert_eq!(r.out.trim().trim_start_matches('0'), "1101");

    let enc = qsafe(&["--seed", "6", "kyber", "encaps", "--public", p(&pk), "--out", p(&kem)]);
    let dec = qsafe(&["--seed", "6", "kyber", "decaps", "--private", p(&sk), "--ciphertext", p(&kem)]);
    assert_eq!(enc.code, 0);
    assert_eq!(enc.out, dec.out);
    assert_eq!(dec.out.trim().len(), 64);

    // a ciphertext file handed in as a key
    let r = qsafe(&["--seed", "6", "kyber", "decrypt", "--private", p(&ct), "--ciphertext", p(&ct)]);
    assert_eq!(r.code, 1);

    let text = std::fs::read_to_string(&sk).unwrap();
    let cut: String = text.lines().take(7).collect::<Vec<_>>().join("\n");
    std::fs::write(&sk, cut).unwrap();
    let r = qsafe(&["--seed", "6", "kyber", "decaps", "--private", p(&sk), "--ciphertext", p(&kem)]);
    assert_eq!(r.code, 1);
    assert!(r.err.contains("line"), "{}", r.err);
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn dilithium_key_files_sign_and_verify() {
    let dir = scratch("dilithium");
    let (pk, sk, sig) = (dir.join("pk"), dir.join("sk"), dir.join("sig"));
    assert_eq!(qsafe(&["--seed", "7", "dilithium", "keygen", "--public", p(&pk), "--private", p(&sk)]).code, 0);
    let r = qsafe(&["--seed", "8", "dilithium", "sign", "--private", p(&sk), "--public", p(&pk), "--message", "hello", "--out", p(&sig)]);
    assert_eq!(r.code, 0, "{}", r.err);
    let ok = qsafe(&["--seed", "8", "dilithium", "verify", "--public", p(&pk), "--message", "hello", "--signature", p(&sig)]);
    assert_eq!((ok.code, ok.out.trim()), (0, "valid"));
    let bad = qsafe(&["--seed", "8", "dilithium", "verify", "--public", p(&pk), "--message", "hellp", "--signature", p(&sig)]);
    assert_eq!((bad.code, bad.out.trim()), (1, "invalid"));
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn hybrid_modes_and_mosca() {
    for mode in ["c-then-q", "q-then-c", "parallel"] {
        let r = qsafe(&["--seed", "9", "hybrid", "--mode", mode, "--classical", "rsa"]);
        assert_eq!(r.code, 0, "{mode}: {}", r.err);
    }
    assert_eq!(qsafe(&["--seed", "9", "hybrid", "--mode", "sideways"]).code, 2);

    let verdict = |m: &str, c: &str, q: &str| qsafe(&["--seed", "0", "mosca", "--migrate", m, "--confi", c, "--crqc", q]).out;
    assert!(verdict("5", "10", "12").contains("slack -3 AT_RISK"));
    assert!(verdict("2", "3", "10").contains("slack 5 SAFE"));
    assert!(verdict("1", "12", "10").contains("slack -3 AT_RISK IN_TROUBLE"));
}

#[test]
fn seed_from_environment() {
    let exe = env!("CARGO_BIN_EXE_qsafe");
    let run = |seed: &str| Command::new(exe).args(["ecc", "demo"]).env("QSAFE_SEED", seed).output().unwrap();
    let (a, b, c) = (run("11"), run("11"), run("12"));
    assert!(a.status.success());
    assert!(a.stderr.is_empty());
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn serve_and_connect_over_tcp() {
    let exe = env!("CARGO_BIN_EXE_qsafe");
    let mut server = Command::new(exe)
        .args(["--seed", "1", "serve", "--port", "0", "--once", "--hybrid"])
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut stderr = BufReader::new(server.stderr.take().unwrap());
    let mut first = String::new();
    stderr.read_line(&mut first).unwrap();
    let drain = std::thread::spawn(move || std::io::read_to_string(stderr).unwrap());
    let addr = first.strip_prefix("listening on ").unwrap().split_whitespace().next().unwrap();
    let port = addr.rsplit(':').next().unwrap();

    let mut client = Command::new(exe)
        .args(["--seed", "2", "connect", "--port", port, "--hybrid"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    client.stdin.take().unwrap().write_all(b"across the wire\n").unwrap();
    let client = client.wait_with_output().unwrap();
    assert!(client.status.success(), "{}", String::from_utf8_lossy(&client.stderr));
    let server = server.wait_with_output().unwrap();
    assert!(server.status.success());
    assert!(drain.join().unwrap().contains("connection from"));
    assert_eq!(String::from_utf8_lossy(&server.stdout), "across the wire\n");
}
