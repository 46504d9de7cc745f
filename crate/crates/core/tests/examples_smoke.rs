//! Every example builds and exits cleanly.

use std::process::Command;

#[test]
fn examples_run() {
    let manifest = env!("CARGO_MANIFEST_DIR");
    for name in [
        "p1_bundles",
        "garnier_involution",
        "twisted_garnier_flow",
        "spectral_curve",
        "calogero_moser",
        "gaudin_magnet",
        "hill_operators",
        "hitchin_dimensions",
    ] {
        let out = Command::new(env!("CARGO"))
            .args(["run", "--quiet", "--release", "--example", name, "--manifest-path"])
            .arg(format!("{manifest}/Cargo.toml"))
            .output()
            .expect("cargo runs");
        assert!(out.status.success(), "{name}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(!out.stdout.is_empty(), "{name} printed nothing");
    }
}
