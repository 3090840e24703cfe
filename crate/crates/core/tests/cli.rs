use std::path::Path;

use ocnsim::cli;
use ocnsim::coloring::ColoringDocument;
use ocnsim::format::parse_net_internal;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = cli::run(std::iter::once("ocnsim").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn weak_check_dumps_every_level() {
    let dir = tempfile::tempdir().unwrap();
    let sp = write(dir.path(), "s.ocn", "net S\nstates p\nactions a\np a -1 p\n");
    let du = write(dir.path(), "d.ocn", "net D\nstates q\nactions a tau\nq tau +1 q\nq a -1 q\n");
    let dump = dir.path().join("levels");
    let (code, out, err) = run(&["check", "--weak", &sp, &du, "p:7", "q:0", "--dump-approximants", dump.to_str().unwrap()]);
    assert_eq!((code, out.as_str()), (0, "simulated: true\n"), "{err}");
    let mut files: Vec<_> = std::fs::read_dir(&dump).unwrap().map(|e| e.unwrap().path()).collect();
    files.sort();
    assert!(files.len() >= 2 && files.len() % 2 == 0);
    for f in files {
        parse_net_internal(&std::fs::read_to_string(&f).unwrap()).unwrap();
    }
}

#[test]
fn strong_and_weak_differ_on_pumping() {
    let dir = tempfile::tempdir().unwrap();
    let sp = write(dir.path(), "s.ocn", "net S\nstates p\nactions a\np a -1 p\n");
    let du = write(dir.path(), "d.ocn", "net D\nstates q\nactions a tau\nq tau +1 q\nq a -1 q\n");
    assert_eq!(run(&["check", "--strong", &sp, &du, "p:3", "q:0"]).0, cli::EXIT_FALSE);
    assert_eq!(run(&["check", "--weak", &sp, &du, "p:3", "q:0"]).0, cli::EXIT_TRUE);
}

#[test]
fn export_to_file_with_pair_filter() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.ocn", "net A\nstates p q\nactions a\np a -1 p\nq a -1 q\n");
    let out = dir.path().join("rel.json");
    let (code, _, err) = run(&["export", &a, &a, "--out", out.to_str().unwrap(), "--pairs", "p,q"]);
    assert_eq!(code, 0, "{err}");
    let doc: ColoringDocument = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(doc.pairs.len(), 1);
    assert_eq!((doc.pairs[0].q.as_str(), doc.pairs[0].q_dup.as_str()), ("p", "q"));
}

#[test]
fn render_to_file_and_bad_pair() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.ocn", "net A\nstates p\nactions a\np a -1 p\n");
    let out = dir.path().join("g.svg");
    let (code, _, _) = run(&["render", &a, &a, "--pair", "p,p", "--max", "4", "--format", "svg", "--out", out.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(std::fs::read_to_string(&out).unwrap().starts_with("<?xml"));
    assert_eq!(run(&["render", &a, &a, "--pair", "p,x"]).0, cli::EXIT_USAGE);
    assert_eq!(run(&["render", &a, &a, "--pair", "p"]).0, cli::EXIT_USAGE);
}

#[test]
fn oracle_and_configuration_errors() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.ocn", "net A\nstates p\nactions a\np a -1 p\n");
    let (code, out, _) = run(&["oracle", &a, &a, "p:5", "p:3", "--rounds", "10"]);
    assert_eq!((code, out.as_str()), (cli::EXIT_FALSE, "spoiler wins within 4 rounds\n"));
    assert_eq!(run(&["oracle", &a, &a, "p:3", "p:5"]).0, cli::EXIT_TRUE);
    assert_eq!(run(&["check", &a, &a, "p:-1", "p:3"]).0, cli::EXIT_USAGE);
    assert_eq!(run(&["check", &a, &a, "p3", "p:3"]).0, cli::EXIT_USAGE);
    assert_eq!(run(&["check", &a, &a, "x:1", "p:3"]).0, cli::EXIT_USAGE);
    let (code, out, _) = run(&["belts", &a, &a]);
    assert_eq!(code, 0);
    assert_eq!(out, "q\tq'\tslope\tc\tbound\tvertical\np\tp\t[1,1]\t1\t4\tno\n");
}
