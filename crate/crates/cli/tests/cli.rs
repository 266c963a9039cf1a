use std::process::{Command, Output};

use serde_json::Value;

fn sqtori(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sqtori"))
        .args(args)
        .output()
        .expect("failed to run sqtori")
}

fn stdout(args: &[&str]) -> String {
    let out = sqtori(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stderr.is_empty());
    String::from_utf8(out.stdout).unwrap()
}

fn json_lines(args: &[&str]) -> Vec<Value> {
    stdout(args).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

#[test]
fn count_golden() {
    assert_eq!(stdout(&["count", "1"]), "n=1 psi=1 sigma=1 rho=1.0\n");
    assert_eq!(stdout(&["count", "4"]), "n=4 psi=6 sigma=7 rho=0.857142857143\n");
    assert_eq!(stdout(&["count", "12", "--format", "csv"]), "n,psi,sigma,rho\n12,24,28,0.857142857143\n");
    assert_eq!(
        stdout(&["--format", "json", "count", "12"]),
        "{\"n\":12,\"psi\":24,\"sigma\":28,\"rho\":0.857142857143}\n"
    );
}

#[test]
fn enumerate_golden() {
    assert_eq!(stdout(&["enumerate", "1", "--format", "csv"]), "w,h,t,cyclic\n1,1,0,true\n");
    assert_eq!(
        stdout(&["enumerate", "2", "--format", "csv"]),
        "w,h,t,cyclic\n1,2,0,true\n2,1,0,true\n2,1,1,true\n"
    );
    let rows = stdout(&["enumerate", "4", "--cyclic-only", "--format", "csv"]);
    assert_eq!(rows.lines().count(), 7);
    assert!(!rows.contains("2,2,0"));
    let all = stdout(&["enumerate", "4", "--format", "csv"]);
    assert_eq!(all.lines().count(), 8);
    assert!(all.contains("2,2,0,false\n"));
}

#[test]
fn classify_golden() {
    assert_eq!(
        stdout(&["classify", "1", "0", "0", "1"]),
        "w=1 h=1 t=0 index=1 content=1 d1=1 d2=1 cyclic=true\n"
    );
    assert_eq!(
        stdout(&["classify", "2", "0", "0", "2"]),
        "w=2 h=2 t=0 index=4 content=2 d1=2 d2=2 cyclic=false\n"
    );
    assert_eq!(
        stdout(&["classify", "0", "2", "3", "1"]),
        "w=6 h=1 t=3 index=6 content=1 d1=1 d2=6 cyclic=true\n"
    );
    assert_eq!(
        stdout(&["classify", "-2", "-4", "6", "-2", "--format", "csv"]),
        "w,h,t,index,content,d1,d2,cyclic\n14,2,8,28,2,2,14,false\n"
    );
}

#[test]
fn sweep_small() {
    let rows = json_lines(&["sweep", "1", "--format", "json"]);
    assert_eq!(rows[0]["cum_ratio"], 1.0);
    assert_eq!(rows.len(), 2);

    let csv = stdout(&["sweep", "10", "--format", "csv"]);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "n,psi,sigma,rho,cum_psi,cum_sigma,cum_ratio");
    assert_eq!(lines.len(), 12);
    assert_eq!(lines[10], "10,18,18,1.0,82,87,0.942528735632");
    assert!(lines[11].starts_with("# final,n=10,cum_ratio=0.942528735632,deviation="));
}

#[test]
fn sweep_million_footer() {
    let out = stdout(&["sweep", "1000000"]);
    let footer = out.lines().last().unwrap();
    let deviation: f64 = footer.rsplit_once("deviation=").unwrap().1.parse().unwrap();
    assert!(deviation < 1e-3, "{footer}");
    assert_eq!(out.lines().count(), 1_000_002);
}

#[test]
fn extremal_table() {
    let rows = json_lines(&["extremal", "40", "--format", "json"]);
    assert_eq!(rows.len(), 40);
    assert_eq!(rows[0]["rho"], 1.0);
    assert_eq!(rows[1]["rho"].as_f64().unwrap(), 0.791208791209);
    let devs: Vec<f64> = rows.iter().map(|r| r["deviation"].as_f64().unwrap()).collect();
    assert!(devs.iter().all(|&d| d >= 0.0));
    assert!(devs.windows(2).skip(1).all(|w| w[1] < w[0]));
}

#[test]
fn formats_carry_the_same_values() {
    let plain = stdout(&["enumerate", "12"]);
    let csv = stdout(&["enumerate", "12", "--format", "csv"]);
    let json = json_lines(&["enumerate", "12", "--format", "json"]);
    let plain_rows: Vec<Vec<String>> = plain.lines().skip(1).map(|l| l.split(' ').map(String::from).collect()).collect();
    let csv_rows: Vec<Vec<String>> = csv.lines().skip(1).map(|l| l.split(',').map(String::from).collect()).collect();
    let json_rows: Vec<Vec<String>> = json
        .iter()
        .map(|o| o.as_object().unwrap().values().map(|v| v.to_string()).collect())
        .collect();
    assert_eq!(plain_rows, csv_rows);
    assert_eq!(csv_rows, json_rows);

    let plain = stdout(&["sweep", "50"]);
    let csv = stdout(&["sweep", "50", "--format", "csv"]);
    let json = json_lines(&["sweep", "50", "--format", "json"]);
    for ((p, c), j) in plain.lines().skip(1).zip(csv.lines().skip(1)).zip(&json).take(50) {
        let p: Vec<&str> = p.split(' ').collect();
        let c: Vec<&str> = c.split(',').collect();
        assert_eq!(p, c);
        let jv: Vec<String> = j.as_object().unwrap().values().map(|v| v.to_string()).collect();
        assert_eq!(c, jv);
    }
}

#[test]
fn output_is_deterministic() {
    for args in [&["sweep", "500", "--format", "csv"][..], &["enumerate", "360"], &["extremal", "50"]] {
        assert_eq!(sqtori(args).stdout, sqtori(args).stdout);
    }
}

#[test]
fn errors_go_to_stderr_with_nonzero_exit() {
    let cases: [(&[&str], i32); 7] = [
        (&["classify", "1", "2", "2", "4"], 1),
        (&["count", "0"], 1),
        (&["count", "abc"], 2),
        (&["enumerate", "1000", "--max-triples", "10"], 1),
        (&["sweep", "1001", "--max-sieve", "1000"], 1),
        (&["extremal", "51"], 2),
        (&["frobnicate"], 2),
    ];
    for (args, code) in cases {
        let out = sqtori(args);
        assert_eq!(out.status.code(), Some(code), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
    }
}
