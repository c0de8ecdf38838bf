use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use tempfile::TempDir;

fn wubi() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_wubi"));
    for var in ["WUBI_TABLE", "WUBI_PUNCT", "WUBI_MODE", "WUBI_THREADS", "WUBI_SEED", "WUBI_LEXICON"] {
        cmd.env_remove(var);
    }
    cmd
}

fn run(cmd: &mut Command, stdin: &str) -> Output {
    let mut child = cmd
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, content: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, content).unwrap();
    p
}

fn read(p: &Path) -> String {
    std::fs::read_to_string(p).unwrap()
}

#[test]
fn encode_decode_files_and_stdin() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "zh.txt", "承诺\n社会 与 人权 问题 。\nhello abc\n");
    let out = dir.path().join("wb.txt");
    let o = run(wubi().arg("encode").arg(&input).arg("-o").arg(&out), "");
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(read(&out), "bd|yad\npy|wf gn w|sc ukd0|jghm1 .\n^hello ^abc\n");

    let o = run(wubi().arg("decode"), &read(&out));
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), read(&input));

    let o = run(wubi().args(["encode", "-"]), "让开");
    assert_eq!(stdout(&o), "yh|ga\n");
}

#[test]
fn strict_errors_carry_file_and_line() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "in.txt", "承诺\n人权abc\n让开\n");
    let o = run(wubi().arg("encode").arg(&input), "");
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.contains(&format!("{}:2:", input.display())), "{err}");
    assert!(err.contains("人权abc"), "{err}");

    let o = run(wubi().args(["--mode", "lenient", "encode"]).arg(&input), "");
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "bd|yad\nw|sc ^abc\nyh|ga\n");
    assert!(stderr(&o).contains(":2:"));

    let o = run(wubi().arg("encode").arg(&input).env("WUBI_MODE", "lenient"), "");
    assert_eq!(o.status.code(), Some(0));

    let o = run(wubi().arg("decode"), "bd|yad\nxxxx|a\n");
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("<stdin>:2:"), "{}", stderr(&o));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["encode", "--bogus"],
        vec!["frobnicate"],
        vec!["--threads", "0", "decode"],
        vec!["vocab", "--cap", "0"],
        vec!["bleu", "--hyp", "x"],
    ] {
        let o = run(wubi().args(&args), "");
        assert_eq!(o.status.code(), Some(2), "{args:?}");
    }
    let o = run(wubi().args(["decode", "/nonexistent/file"]), "");
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn custom_table_and_bad_table() {
    let dir = TempDir::new().unwrap();
    let table = write(&dir, "t.tsv", "# comment\n甲\tlh\n乙\tnnll\n丙\tgmw\n");
    let o = run(wubi().arg("--table").arg(&table).arg("encode"), "甲乙 丙\n");
    assert_eq!(stdout(&o), "lh|nnll gmw\n");
    let o = run(wubi().arg("encode").env("WUBI_TABLE", &table), "甲乙 丙\n");
    assert_eq!(stdout(&o), "lh|nnll gmw\n");

    let bad = write(&dir, "bad.tsv", "甲\tlh\n乙\tzz9\n");
    let o = run(wubi().arg("--table").arg(&bad).arg("encode"), "甲\n");
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));
}

#[test]
fn roundtrip_check_counts() {
    let o = run(wubi().arg("roundtrip-check"), "承诺\n社会 与 人权 问题\nabc ^x\n");
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "3 lines, 0 mismatches\n");

    let o = run(wubi().arg("roundtrip-check"), "承诺\n龘\n人权abc\n");
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "3 lines, 2 mismatches\n");
}

#[test]
fn segment_and_encode_raw() {
    let dir = TempDir::new().unwrap();
    let lex = write(&dir, "lex.txt", "人权\n问题\n社会\n");
    let o = run(wubi().arg("segment").arg("--lexicon").arg(&lex), "社会与人权问题。\n");
    assert_eq!(stdout(&o), "社会 与 人权 问题 。\n");
    let o = run(wubi().arg("encode").arg("--lexicon").arg(&lex), "社会与人权问题。\n");
    assert_eq!(stdout(&o), "py|wf gn w|sc ukd0|jghm1 .\n");
    let o = run(wubi().arg("segment").env("WUBI_LEXICON", &lex), "人权问题\n");
    assert_eq!(stdout(&o), "人权 问题\n");
}

#[test]
fn vocab_build_and_apply() {
    let dir = TempDir::new().unwrap();
    let vocab = dir.path().join("vocab.tsv");
    let o = run(wubi().args(["vocab", "--cap", "2", "-o"]).arg(&vocab), "a a b\nc\n");
    assert!(o.status.success());
    assert_eq!(read(&vocab), "#vocab\tcap=2\ttotal=4\na\t2\nb\t1\n");
    assert!(stderr(&o).contains("75.0000%"), "{}", stderr(&o));
    let o = run(wubi().arg("vocab").arg("--apply").arg(&vocab), "a c b\n\n");
    assert_eq!(stdout(&o), "a <unk> b\n\n");
}

#[test]
fn bpe_learn_apply_undo() {
    let dir = TempDir::new().unwrap();
    let merges = dir.path().join("merges");
    let o = run(wubi().args(["bpe-learn", "--bpe-size", "9", "-o"]).arg(&merges), "low low lower\n");
    assert!(o.status.success(), "{}", stderr(&o));
    let text = read(&merges);
    assert!(text.starts_with("#bpe\tversion=1\tword_end=</w>"), "{text}");
    assert_eq!(text.lines().skip(1).collect::<Vec<_>>(), ["l o", "lo w", "low </w>"]);

    let o = run(wubi().arg("bpe-apply").arg("--merges").arg(&merges), "low lower\n");
    assert_eq!(stdout(&o), "low low@@ e@@ r\n");
    let o = run(wubi().args(["bpe-apply", "--undo"]), "low low@@ e@@ r\n");
    assert_eq!(stdout(&o), "low lower\n");
    let o = run(wubi().arg("bpe-apply"), "x\n");
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn chars_and_undo() {
    let o = run(wubi().arg("chars"), "重 要\n");
    assert_eq!(stdout(&o), "重 <sp> 要\n");
    let o = run(wubi().args(["chars", "--undo"]), "重 <sp> 要\n");
    assert_eq!(stdout(&o), "重 要\n");
}

#[test]
fn stats_output() {
    let o = run(wubi().arg("stats"), "a bb\nccc\n");
    assert_eq!(
        stdout(&o),
        "sentences\t2\nwords_per_sentence\t1.5000\t0.5000\nchars_per_word\t2.0000\t0.8165\nchars_per_sentence\t3.0000\t0.0000\n"
    );
    let o = run(wubi().arg("stats"), "");
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn bleu_report_and_normalization() {
    let dir = TempDir::new().unwrap();
    let hyp = write(&dir, "hyp", "a b c d\n");
    let rf = write(&dir, "ref", "a b c d e\n");
    let report = dir.path().join("report.json");
    let o = run(
        wubi().arg("bleu").arg("--hyp").arg(&hyp).arg("--ref").arg(&rf).arg("--report").arg(&report),
        "",
    );
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("BLEU = 77.8801"), "{}", stdout(&o));
    let json: serde_json::Value = serde_json::from_str(&read(&report)).unwrap();
    assert!((json["corpus_bleu"].as_f64().unwrap() - 77.88).abs() < 0.01);
    assert!((json["bp"].as_f64().unwrap() - 0.7788).abs() < 1e-4);
    assert_eq!(json["precisions"].as_array().unwrap().len(), 4);
    assert_eq!(json["per_sentence"][0]["source_len"], 5);
    assert_eq!(json["bins"][0]["count"], 1);

    let zh_h = write(&dir, "zh_h", "社会 与 人权 问题 。\n承诺 让开\n");
    let zh_r = write(&dir, "zh_r", "社会 与 人权 。\n承诺 让开 公共财产\n");
    let wb_h = write(&dir, "wb_h", "py|wf gn w|sc ukd0|jghm1 .\nbd|yad yh|ga\n");
    let wb_r = write(&dir, "wb_r", "py|wf gn w|sc .\nbd|yad yh|ga wc|aw|mf|u\n");
    let bleu = |h: &Path, r: &Path| {
        let o = run(
            wubi().args(["bleu", "--normalize-cn"]).arg("--hyp").arg(h).arg("--ref").arg(r),
            "",
        );
        assert!(o.status.success(), "{}", stderr(&o));
        stdout(&o)
    };
    let a = bleu(&zh_h, &zh_r);
    assert_eq!(a, bleu(&wb_h, &wb_r));
    assert_eq!(a, bleu(&zh_h, &wb_r));

    let short = write(&dir, "short", "a\n");
    let two = write(&dir, "two", "a\nb\n");
    let o = run(wubi().arg("bleu").arg("--hyp").arg(&short).arg("--ref").arg(&two), "");
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn binned_bleu_table() {
    let dir = TempDir::new().unwrap();
    let hyp = write(&dir, "hyp", "a b c\na b c d\n");
    let rf = write(&dir, "ref", "a b c\na b d d\n");
    let src = write(&dir, "src", "1 2 3\n1 2 3 4 5 6 7 8 9 10 11 12 13 14 15 16 17\n");
    let o = run(
        wubi()
            .arg("binned-bleu")
            .arg("--hyp")
            .arg(&hyp)
            .arg("--ref")
            .arg(&rf)
            .arg("--source")
            .arg(&src)
            .args(["--bin-width", "10"]),
        "",
    );
    let lines: Vec<String> = stdout(&o).lines().map(str::to_owned).collect();
    assert_eq!(lines.len(), 2, "{lines:?}");
    assert!(lines[0].starts_with("0\t10\t100.0000\t1"));
    assert!(lines[1].starts_with("10\t20\t"));
}

#[test]
fn bootstrap_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let rf = write(&dir, "ref", &"a b c d e f\n".repeat(20));
    let junk = write(&dir, "junk", &"x y z\n".repeat(20));
    let r1 = dir.path().join("r1.json");
    let r2 = dir.path().join("r2.json");
    for (report, threads) in [(&r1, "1"), (&r2, "4")] {
        let o = run(
            wubi()
                .args(["--threads", threads, "bootstrap"])
                .arg("--hyp-a")
                .arg(&rf)
                .arg("--hyp-b")
                .arg(&junk)
                .arg("--ref")
                .arg(&rf)
                .args(["--samples", "300", "--seed", "17", "--report"])
                .arg(report),
            "",
        );
        assert!(o.status.success(), "{}", stderr(&o));
        assert!(stdout(&o).contains("p-value\t0.003322"), "{}", stdout(&o));
    }
    assert_eq!(read(&r1), read(&r2));
    let json: serde_json::Value = serde_json::from_str(&read(&r1)).unwrap();
    assert_eq!(json["seed"], 17);
    assert_eq!(json["samples"], 300);
}

#[test]
fn threads_do_not_change_output() {
    let input: String = (0..3000)
        .map(|i| match i % 3 {
            0 => "社会 与 人权 问题 。\n".to_owned(),
            1 => format!("承诺 {i} abc\n"),
            _ => "公共财产 让开\n".to_owned(),
        })
        .collect();
    let base = stdout(&run(wubi().args(["--threads", "1", "encode"]), &input));
    for t in ["2", "8"] {
        assert_eq!(stdout(&run(wubi().args(["--threads", t, "encode"]), &input)), base);
    }
    let back = stdout(&run(wubi().args(["--threads", "8", "decode"]), &base));
    assert_eq!(back, input);
}
