use std::process::{Command, Output};

fn padfix(args: &[&str], env_jobs: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_padfix"));
    cmd.args(args).env_remove("PADFIX_JOBS");
    if let Some(j) = env_jobs {
        cmd.env("PADFIX_JOBS", j);
    }
    cmd.output().expect("spawn padfix")
}

fn stdout(args: &[&str]) -> String {
    let out = padfix(args, None);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn theorem_example_row() {
    let out = stdout(&["count", "--family", "p", "--c", "3", "--p", "3"]);
    assert_eq!(out, "p,c,family,residue,literal,predicted,theorem,verdict\n3,3,p,0,3,3,Thm 2.1,Match\n");
}

#[test]
fn period_two_orbit_row() {
    let out = stdout(&["orbit", "--rational", "--d", "2", "--c", "-21/16", "--z0", "1/4"]);
    assert_eq!(
        out,
        "d,c,p,z0,status,m,n,tail,cycle\n2,-21/16,Q,1/4,Resolved,0,2,,\"1/4,-5/4\"\n"
    );
}

#[test]
fn divergent_orbit_row() {
    let out = stdout(&["orbit", "--rational", "--d", "2", "--c", "1", "--z0", "0", "--cutoff-bits", "64"]);
    let row = out.lines().nth(1).unwrap();
    assert!(row.starts_with("2,1/1,Q,0/1,Divergent,"), "{row}");
    let fields: Vec<&str> = row.splitn(8, ',').collect();
    assert_eq!(fields[6], "0");
}

#[test]
fn multiples_are_all_mismatches() {
    let out = stdout(&["verify", "--family", "p", "--p-range", "5:97", "--c-multiples"]);
    let mut rows = 0;
    for line in out.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        assert_eq!(f[4], f[0], "{line}");
        assert_eq!(f[5], "3");
        assert_eq!(f[7], "Mismatch");
        rows += 1;
    }
    assert_eq!(rows, 23 * 10);
}

#[test]
fn output_independent_of_worker_count() {
    let args = ["density", "--kind", "n-zero", "--c-range", "5:700", "--stride", "11", "--mode", "both"];
    let base = padfix(&[&args[..], &["--jobs", "1"]].concat(), None).stdout;
    for jobs in ["2", "4", "16"] {
        assert_eq!(padfix(&[&args[..], &["--jobs", jobs]].concat(), None).stdout, base);
        assert_eq!(padfix(&args, Some(jobs)).stdout, base);
    }
}

#[test]
fn output_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("padfix-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("fields.json");
    let out = padfix(&["fields", "--degree", "3", "--x", "16", "--format", "json", "--output", path.to_str().unwrap()], None);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let body = std::fs::read_to_string(&path).unwrap();
    assert!(body.starts_with("{\"columns\":[{\"name\":\"degree\",\"kind\":\"int\"}"), "{body}");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn exit_codes() {
    assert_eq!(padfix(&["--help"], None).status.code(), Some(0));
    assert_eq!(padfix(&["count", "--family", "p"], None).status.code(), Some(2));
    assert_eq!(padfix(&["count", "--family", "p", "--c", "1", "--p", "4"], None).status.code(), Some(2));
    assert_eq!(padfix(&["count", "--family", "p", "--c", "1", "--p", "3"], Some("0")).status.code(), Some(2));
    assert_eq!(padfix(&["count", "--family", "p", "--c", "1", "--p", "3"], Some("many")).status.code(), Some(2));
    let out = padfix(&["fields", "--degree", "2", "--x", "1", "--output", "/nonexistent/dir/out.csv"], None);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn flag_overrides_environment() {
    let out = padfix(&["count", "--family", "p", "--c", "1", "--p", "3", "--jobs", "2"], Some("0"));
    assert!(out.status.success());
}

#[test]
fn every_subcommand_documents_columns() {
    for sub in ["orbit", "fixedpoints", "count", "verify", "avg", "density", "fields"] {
        let help = stdout(&[sub, "--help"]);
        assert!(help.contains("Columns: "), "{sub}");
    }
}
