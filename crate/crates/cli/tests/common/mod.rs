use std::path::PathBuf;
use std::process::{Command, Stdio};
use std::io::Write;

pub struct Case {
    pub name: &'static str,
    pub args: &'static [&'static str],
    pub stdin: Option<&'static str>,
    pub exit: i32,
}

pub const CASES: &[Case] = &[
    Case { name: "classify_identical", args: &["classify", "split_1_2.json", "split_1_2.json"], stdin: None, exit: 0 },
    Case { name: "classify_permuted", args: &["classify", "split_1_2.json", "split_2_1.json", "--witness"], stdin: None, exit: 0 },
    Case { name: "classify_inequivalent", args: &["classify", "tate_1.json", "tate_2.json"], stdin: None, exit: 1 },
    Case { name: "classify_level2_oracle", args: &["classify", "level2.json", "split_half_1.json", "--witness", "--oracle"], stdin: None, exit: 0 },
    Case { name: "classify_dimension_mismatch", args: &["classify", "tate_1.json", "product.json"], stdin: None, exit: 1 },
    Case { name: "mirror_level2", args: &["mirror", "level2.json"], stdin: None, exit: 0 },
    Case { name: "mirror_product", args: &["mirror", "product.json"], stdin: None, exit: 0 },
    Case { name: "mirror_stdin", args: &["mirror", "-"], stdin: Some("{\"factors\": [{\"areas\": [\"7/3\"], \"l\": 1}]}"), exit: 0 },
    Case { name: "reduce_mixed", args: &["reduce", "--areas", "1,2,3", "--l-vector", "4,2,1"], stdin: None, exit: 0 },
    Case { name: "reduce_not_reducible", args: &["reduce", "--areas", "1,1,1", "--l-vector", "2,3,6"], stdin: None, exit: 2 },
    Case { name: "reduce_non_coprime", args: &["reduce", "--areas", "1,1", "--l-vector", "2,4"], stdin: None, exit: 2 },
    Case { name: "divisors_2", args: &["divisors", "form_2.json"], stdin: None, exit: 0 },
    Case { name: "divisors_4", args: &["divisors", "form_4.json"], stdin: None, exit: 0 },
    Case { name: "divisors_rational", args: &["divisors", "form_rational.json"], stdin: None, exit: 2 },
    Case { name: "strictify_z3_seed7", args: &["strictify", "--group", "Z3", "--seed", "7"], stdin: None, exit: 0 },
    Case { name: "strictify_s3_z7_twisted", args: &["strictify", "--group", "S3", "--coeff", "Z7", "--twist", "--seed", "1"], stdin: None, exit: 0 },
    Case { name: "strictify_group_file", args: &["strictify", "--group-file", "klein.json", "--coeff", "Qstar", "--twist", "--seed", "3"], stdin: None, exit: 0 },
    Case { name: "parse_error", args: &["classify", "broken.json", "tate_1.json"], stdin: None, exit: 2 },
];

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data")
}

pub fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{name}.json"))
}

/// Runs the binary inside the data directory; returns exit code and stdout.
pub fn run(args: &[&str], stdin: Option<&str>) -> (i32, String) {
    let mut child = Command::new(env!("CARGO_BIN_EXE_isotori"))
        .args(args)
        .current_dir(data_dir())
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    {
        let mut pipe = child.stdin.take().expect("stdin");
        if let Some(input) = stdin {
            pipe.write_all(input.as_bytes()).expect("write stdin");
        }
    }
    let out = child.wait_with_output().expect("binary exits");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).expect("utf-8 output"))
}
