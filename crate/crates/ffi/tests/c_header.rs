//! Builds and runs a small C program against the generated header and the
//! shared library. Skipped when no C compiler is on PATH.

use std::path::PathBuf;
use std::process::Command;

fn compiler() -> Option<String> {
    ["cc", "gcc", "clang"]
        .into_iter()
        .find(|c| Command::new(c).arg("--version").output().is_ok())
        .map(str::to_owned)
}

#[test]
fn c_program_links_and_runs() {
    let Some(cc) = compiler() else {
        eprintln!("no C compiler found, skipping");
        return;
    };
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    // target/<profile>/deps/<test binary>
    let exe = std::env::current_exe().unwrap();
    let lib_dir = exe.parent().unwrap().parent().unwrap().to_path_buf();
    let lib = lib_dir.join(format!("{}wubi_ffi{}", std::env::consts::DLL_PREFIX, std::env::consts::DLL_SUFFIX));
    assert!(lib.exists(), "shared library not built at {}", lib.display());

    let out_dir = tempfile::tempdir().unwrap();
    let bin = out_dir.path().join("smoke");
    let status = Command::new(&cc)
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(manifest.join("tests/c/smoke.c"))
        .arg("-L")
        .arg(&lib_dir)
        .arg("-lwubi_ffi")
        .arg(format!("-Wl,-rpath,{}", lib_dir.display()))
        .arg("-o")
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success(), "C compile failed");
    let run = Command::new(&bin).output().unwrap();
    assert!(
        run.status.success(),
        "C program failed: {}",
        String::from_utf8_lossy(&run.stderr)
    );
    assert_eq!(String::from_utf8_lossy(&run.stdout).trim(), "ok");
}
