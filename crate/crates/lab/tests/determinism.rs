use std::process::Command;

fn run(args: &[&str]) -> Vec<u8> {
    let o = Command::new(env!("CARGO_BIN_EXE_rcgeom")).args(args).output().expect("binary runs");
    assert!(o.status.code().unwrap() <= 1, "{}", String::from_utf8_lossy(&o.stderr));
    o.stdout
}

#[test]
fn verify_reports_are_byte_identical() {
    for scene in ["catenoid_frame_cylinder", "torus_standard"] {
        let base = run(&["verify", "--builtin", scene, "--grid", "24x24", "--jobs", "1"]);
        assert!(!base.is_empty());
        for jobs in ["1", "3", "8"] {
            assert_eq!(run(&["verify", "--builtin", scene, "--grid", "24x24", "--jobs", jobs]), base, "{scene} jobs={jobs}");
        }
    }
}

#[test]
fn field_exports_are_byte_identical() {
    let args = |j: &'static str| ["fields", "--builtin", "cartan_schouten_sphere", "--param", "lambda=0.3", "--grid", "20x24", "--jobs", j];
    let base = run(&args("1"));
    assert_eq!(run(&args("1")), base);
    assert_eq!(run(&args("6")), base);
}
