use std::fs;
use std::path::Path;

use ccexp::automata::text::{dfa_from_text, dfa_to_text, dfao_from_text, dfao_to_text};
use ccexp::cli::{run, EXIT_FALSE, EXIT_OK, EXIT_RESOURCE, EXIT_USAGE};
use ccexp::Rational;
use tempfile::TempDir;

struct Output {
    code: i32,
    out: String,
    err: String,
}

fn ccexp(cache: &Path, args: &[&str]) -> Output {
    let mut argv = vec!["ccexp", "--no-timing", "--cache-dir", cache.to_str().unwrap()];
    argv.extend_from_slice(args);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(argv, &mut out, &mut err);
    Output {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

fn script(dir: &TempDir, text: &str) -> String {
    let path = dir.path().join("script.txt");
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn node_count(dot: &str) -> usize {
    dot.lines().filter(|l| l.contains("[shape=")).count()
}

#[test]
fn word_mode_uses_the_oracle() {
    let dir = TempDir::new().unwrap();
    let r = ccexp(dir.path(), &["ccexp", "--word", "amalgam"]);
    assert_eq!((r.code, r.out.as_str()), (EXIT_OK, "5/2\n"));
    let r = ccexp(dir.path(), &["ccexp", "--word", "a"]);
    assert_eq!(r.out, "1/1\n");
    let r = ccexp(dir.path(), &["ccexp", "--word", ""]);
    assert_eq!(r.code, EXIT_USAGE);
}

#[test]
fn prefix_and_factor_modes_use_the_automata() {
    let dir = TempDir::new().unwrap();
    let r = ccexp(dir.path(), &["ccexp", "--prefix", "9"]);
    assert_eq!((r.code, r.out.as_str()), (EXIT_OK, "8/3\n"), "{}", r.err);
    assert!(dir.path().join("artifacts/tm/dfao_prefix.txt").exists());
    let r = ccexp(dir.path(), &["ccexp", "--factor", "7", "10", "--oracle"]);
    assert_eq!((r.code, r.out.as_str()), (EXIT_OK, "7/2\n"), "{}", r.err);
    let r = ccexp(dir.path(), &["ccexp", "--factor", "7", "10"]);
    assert_eq!(r.out, "7/2\n");
    let r = ccexp(dir.path(), &["ccexp", "--prefix", "seven"]);
    assert_eq!(r.code, EXIT_USAGE);
}

#[test]
fn oracle_mismatch_fails_loudly() {
    let dir = TempDir::new().unwrap();
    assert_eq!(ccexp(dir.path(), &["ccexp", "--prefix", "9"]).code, EXIT_OK);
    // Replace the cached prefix automaton by a constant one.
    let path = dir.path().join("artifacts/tm/dfao_prefix.txt");
    let m = dfao_from_text::<Option<Rational>>(&fs::read_to_string(&path).unwrap()).unwrap();
    let constant = m.map_outputs(|_| Some(Rational::integer(1)));
    fs::write(&path, dfao_to_text(&constant)).unwrap();
    let r = ccexp(dir.path(), &["ccexp", "--prefix", "9", "--oracle"]);
    assert_eq!(r.code, EXIT_FALSE);
    assert!(r.out.contains("mismatch"), "{}", r.out);
}

#[test]
fn prove_runs_scripts() {
    let dir = TempDir::new().unwrap();
    let empty = script(&dir, "");
    let r = ccexp(dir.path(), &["prove", &empty]);
    assert_eq!((r.code, r.out.as_str()), (EXIT_OK, ""));

    let listing = script(
        &dir,
        "def crep \"(Aj ((j>=i)&(j+p<s+n)&(j+p<i+m)) => T[j]=T[j+p]) &\n\
         (Aj ((j>=i)&(j<s+n)&(j+p>=s+n)&(j+p<i+m)) => T[j]=T[(j+p)-n]) &\n\
         (Aj ((j>=i)&(j>=s+n)&(j+p<i+m)) => T[j-n]=T[(j+p)-n])\":\n\
         eval ok \"Ai T[i]=T[i]\":\n",
    );
    let r = ccexp(dir.path(), &["prove", &listing]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    assert_eq!(r.out, "crep: 1423 states elapsed_ms=0\nok: true elapsed_ms=0\n");

    let falsified = script(&dir, "eval bad \"An n>=1\":\n");
    let r = ccexp(dir.path(), &["prove", &falsified]);
    assert_eq!(r.code, EXIT_FALSE);
    assert_eq!(r.out, "bad: false elapsed_ms=0\nbad: counterexample n=0\n");

    let listing = script(&dir, "def even \"E k n=2*k\":\nfirst even 4:\n");
    let r = ccexp(dir.path(), &["prove", &listing]);
    assert!(r.out.ends_with("first even (n): 0 2 4 6\n"), "{}", r.out);
}

#[test]
fn prove_reports_errors_with_location() {
    let dir = TempDir::new().unwrap();
    let broken = script(&dir, "eval x \"Ai T[i]=\":\n");
    let r = ccexp(dir.path(), &["prove", &broken]);
    assert_eq!(r.code, EXIT_USAGE);
    assert!(r.err.contains("script.txt:1:"), "{}", r.err);
    let unknown = script(&dir, "eval x \"$nothing(1)\":\n");
    assert_eq!(ccexp(dir.path(), &["prove", &unknown]).code, EXIT_USAGE);
    let missing = dir.path().join("missing.txt");
    assert_eq!(
        ccexp(dir.path(), &["prove", missing.to_str().unwrap()]).code,
        EXIT_USAGE
    );
}

#[test]
fn memory_ceiling_is_a_resource_failure() {
    let dir = TempDir::new().unwrap();
    let big = script(&dir, "def p \"E j (j<i+m) & T[j]=T[j+p] & T[j+n]=T[j+s]\":\n");
    let r = ccexp(dir.path(), &["--memory-ceiling", "4096", "prove", &big]);
    assert_eq!(r.code, EXIT_RESOURCE, "{}{}", r.out, r.err);
}

#[test]
fn usage_errors() {
    let dir = TempDir::new().unwrap();
    assert_eq!(ccexp(dir.path(), &[]).code, EXIT_USAGE);
    assert_eq!(ccexp(dir.path(), &["theorem", "nosuch"]).code, EXIT_USAGE);
    assert_eq!(ccexp(dir.path(), &["theorem"]).code, EXIT_USAGE);
    assert_eq!(ccexp(dir.path(), &["export", "dfao_prefix"]).code, EXIT_USAGE);
    assert_eq!(
        ccexp(dir.path(), &["ccexp", "--word", "ab", "--prefix", "3"]).code,
        EXIT_USAGE
    );
    assert_eq!(
        ccexp(dir.path(), &["--sequence", "fibonacci", "cache", "path"]).code,
        EXIT_USAGE
    );
}

fn artifacts(cache: &Path) -> Vec<(String, String)> {
    let mut files: Vec<(String, String)> = fs::read_dir(cache.join("artifacts/tm"))
        .unwrap()
        .map(|e| {
            let p = e.unwrap().path();
            (
                p.file_name().unwrap().to_string_lossy().into_owned(),
                fs::read_to_string(&p).unwrap(),
            )
        })
        .collect();
    files.sort();
    files
}

#[test]
fn full_suite_is_reproducible_and_exportable() {
    let first = TempDir::new().unwrap();
    let run1 = ccexp(first.path(), &["theorem", "--all"]);
    assert_eq!(run1.code, EXIT_OK, "{}{}", run1.out, run1.err);
    assert!(
        run1.out.contains("theorem dfao_ace result=built states=49"),
        "{}",
        run1.out
    );
    assert!(run1.out.contains("distinct_outputs=31"));

    let run2 = ccexp(first.path(), &["theorem", "--all"]);
    assert_eq!(run1.out, run2.out);

    let second = TempDir::new().unwrap();
    let run3 = ccexp(second.path(), &["theorem", "--all"]);
    assert_eq!(run1.out, run3.out);
    assert_eq!(artifacts(first.path()), artifacts(second.path()));

    let dot = ccexp(first.path(), &["export", "dfao_prefix", "--format", "dot"]);
    assert_eq!(dot.code, EXIT_OK);
    assert_eq!(node_count(&dot.out), 29);
    let dot = ccexp(first.path(), &["export", "dfao_gcce", "--format", "dot"]);
    assert_eq!(node_count(&dot.out), 9);
    let crep = ccexp(first.path(), &["export", "crep", "--format", "dot"]);
    assert!(crep.out.starts_with("digraph dfa"));

    let out = first.path().join("crep.txt");
    let r = ccexp(first.path(), &["export", "crep", "--out", out.to_str().unwrap()]);
    assert_eq!(r.code, EXIT_OK);
    let text = fs::read_to_string(&out).unwrap();
    let back = dfa_from_text(&text).unwrap();
    assert_eq!(dfa_to_text(&back), text);
    assert_eq!(back.live_states(), 1423);
    let ace = ccexp(first.path(), &["export", "dfao_ace"]);
    assert_eq!(dfao_to_text(&dfao_from_text::<String>(&ace.out).unwrap()), ace.out);

    let list = ccexp(first.path(), &["cache", "list"]);
    assert!(list.out.contains("dfao_factor"), "{}", list.out);
    let clear = ccexp(first.path(), &["cache", "clear"]);
    assert_eq!(clear.code, EXIT_OK);
    let list = ccexp(first.path(), &["cache", "list"]);
    assert!(list.out.starts_with("predicates: 0\n"), "{}", list.out);
}
