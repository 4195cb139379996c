use std::process::{Command, Output};

use serde_json::Value;
use spinblock::bar_partitions::{bar_quotient, Multipartition, Partition};
use spinblock::cli::CliError;
use spinblock::fock::{apply_f, FockVector};
use spinblock::root_datum::RootVector;
use spinblock::tableaux::{tableau_degree, word_of, Node, Tableau};
use spinblock::{LaurentPoly, SpinError};

fn spinblock(args: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spinblock"))
        .args(args.split_whitespace())
        .output()
        .expect("binary runs")
}

fn stdout(args: &str) -> String {
    let out = spinblock(args);
    assert_eq!(out.status.code(), Some(0), "{args}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &str) -> Value {
    serde_json::from_str(&stdout(args)).unwrap()
}

fn part(v: &[usize]) -> Partition {
    Partition::new(v.to_vec()).unwrap()
}

#[test]
fn smoke_examples() {
    assert_eq!(stdout("core --p 5 --lambda 16,11,10,10,9,4,1").trim(), "[1]");
    assert_eq!(stdout("dim --p 3 --N 1 --i 010 --j 010").trim(), "[[0,1],[2,1],[4,1]]");
    assert_eq!(stdout("ydim --p 5 --d 2").trim(), "98");
}

#[test]
fn table_format() {
    let t = stdout("--format table dim --p 3 --N 1 --i 010 --j 010");
    assert_eq!(t.trim(), "1*q^0 + 1*q^2 + 1*q^4");
    let b = stdout("--format table blocks --n 4 --p 3");
    assert_eq!(b.lines().nth(1).unwrap().split_whitespace().collect::<Vec<_>>(), ["3,1", "24", "1"]);
}

#[test]
fn validation_errors_exit_two() {
    for args in [
        "frobnicate",
        "core --p 4 --lambda 3",
        "core --p 5 --lambda 2,2",
        "blocks --n 8 --p 3",
        "ydim --p 5 --d 6",
        "tableaux --p 3 --shape 41",
        "dim --p 3 --i 012 --j 012",
    ] {
        let out = spinblock(args);
        assert_eq!(out.status.code(), Some(2), "{args}");
        assert!(!out.stderr.is_empty(), "{args}");
        assert!(out.stdout.is_empty(), "{args}");
    }
    let out = spinblock("blocks --n 8 --p 3");
    assert!(String::from_utf8_lossy(&out.stderr).contains('7'));
    let out = spinblock("frobnicate");
    assert!(String::from_utf8_lossy(&out.stderr).to_lowercase().contains("usage"));
}

#[test]
fn force_lifts_policy_caps() {
    let capped = spinblock("tableaux --p 5 --shape 41");
    assert_eq!(capped.status.code(), Some(2));
    let forced = spinblock("--force ydim --p 3 --d 6");
    assert_eq!(forced.status.code(), Some(0));
    assert_eq!(String::from_utf8(forced.stdout).unwrap().trim(), (720u64 * 3u64.pow(6)).to_string());
}

#[test]
fn internal_errors_exit_one() {
    assert_eq!(CliError::from(SpinError::NonDivisible("x".into())).exit_code(), 1);
    assert_eq!(CliError::from(SpinError::UnexpectedEigenvalue(3)).exit_code(), 1);
    assert_eq!(CliError::from(SpinError::Invalid("x".into())).exit_code(), 2);
}

#[test]
fn deterministic_output() {
    for args in ["blocks --n 5 --p 3 --idempotents", "tableaux --p 5 --shape 5,3,1", "algebra --build B --l 2"] {
        let a = spinblock(args);
        let b = spinblock(args);
        assert_eq!(a.status.code(), Some(0), "{args}");
        assert_eq!(a.stdout, b.stdout, "{args}");
    }
}

#[test]
fn json_round_trips() {
    let d: LaurentPoly = serde_json::from_value(json("dim --p 3 --N 1 --i 010 --j 010")).unwrap();
    assert_eq!(d, LaurentPoly::from_terms([(0, 1), (2, 1), (4, 1)]));
    assert_eq!(serde_json::to_string(&d).unwrap(), "[[0,1],[2,1],[4,1]]");

    let lam = part(&[16, 11, 10, 10, 9, 4, 1]);
    let q: Multipartition = serde_json::from_value(json("quotient --p 5 --lambda 16,11,10,10,9,4,1")).unwrap();
    assert_eq!(q, bar_quotient(&lam, 5).unwrap());
    let c: RootVector = serde_json::from_value(json("content --p 5 --lambda 16,11,10,10,9,4,1")).unwrap();
    assert_eq!(c, spinblock::bar_partitions::content(&lam, 5).unwrap());
    let r: Partition = serde_json::from_value(json("rouquier --p 5 --d 2")).unwrap();
    assert_eq!(r, part(&[12, 7, 6, 2, 1]));

    let f = json("fock --p 5 --start 5,5,2 --apply F0");
    let v = FockVector::from_json(5, 1, &f["vector"]).unwrap();
    let expect = apply_f(0, &FockVector::basis(5, Multipartition::single(part(&[5, 5, 2])))).unwrap();
    assert_eq!(v, expect);

    let t = json("tableaux --p 3 --shape 3,1");
    let shape: Multipartition = serde_json::from_value(t["shape"].clone()).unwrap();
    let rows = t["tableaux"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    for row in rows {
        let filling: Vec<Node> = serde_json::from_value(row["filling"].clone()).unwrap();
        let tab = Tableau { shape: shape.clone(), filling };
        let deg: LaurentPoly = serde_json::from_value(row["degree"].clone()).unwrap();
        assert_eq!(tableau_degree(&tab, 3).unwrap(), deg);
        let word: Vec<usize> = serde_json::from_value(row["word"].clone()).unwrap();
        assert_eq!(word_of(&tab, 3).letters, word);
    }
}
