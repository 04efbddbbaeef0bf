//! Compiles `examples/demo.c` against the generated header and the static
//! library, then runs it. Skipped (with a notice) when no C compiler or no
//! uplifted static library is found, so exotic build layouts don't fail.

use std::path::PathBuf;
use std::process::Command;

#[test]
fn demo_c_compiles_and_runs() {
    if Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping C demo: no `cc` on PATH");
        return;
    }

    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    // Tests run from target/<profile>/deps/...; the uplifted staticlib
    // sits one level up.
    let profile_dir = std::env::current_exe()
        .ok()
        .and_then(|exe| exe.parent().map(PathBuf::from))
        .and_then(|deps| deps.parent().map(PathBuf::from))
        .expect("test binary has a parent directory");
    let staticlib = profile_dir.join("libmilnor_capi.a");
    if !staticlib.exists() {
        eprintln!("skipping C demo: {} not found", staticlib.display());
        return;
    }

    let out = std::env::temp_dir().join(format!("milnor-demo-{}", std::process::id()));
    let compile = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Wextra")
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(manifest.join("examples/demo.c"))
        .arg(&staticlib)
        .args(["-lpthread", "-ldl", "-lm"])
        .arg("-o")
        .arg(&out)
        .output()
        .expect("cc should spawn");
    assert!(
        compile.status.success(),
        "compilation failed:\n{}",
        String::from_utf8_lossy(&compile.stderr)
    );

    let run = Command::new(&out).output().expect("demo should spawn");
    std::fs::remove_file(&out).ok();
    assert!(
        run.status.success(),
        "demo exited with {:?}: {}",
        run.status.code(),
        String::from_utf8_lossy(&run.stderr)
    );
    let stdout = String::from_utf8(run.stdout).expect("demo stdout is UTF-8");
    assert_eq!(
        stdout,
        "dim=8 degree=10 d0=2\n\
         candidate: -15 + 60 t - 110 t^2 + 119 t^3 - 82 t^4 + 36 t^5 - 9 t^6 + t^7\n\
         count5=11160\n"
    );
}
