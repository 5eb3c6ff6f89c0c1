use std::io::Write as _;

use modcoh::catalog::lookup;
use modcoh::cli::run;
use modcoh::gmodules::{permutation_module, regular_module, trivial_module, GModule};
use modcoh::groups::center;
use tempfile::NamedTempFile;

fn call(args: &str) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("modcoh").chain(args.split_whitespace());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn module_file(m: &GModule) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    writeln!(f, "p {}\ndim {}", m.p(), m.dim()).unwrap();
    for &g in m.group().generators() {
        writeln!(f, "mat").unwrap();
        let a = m.action(g);
        for r in 0..a.rows() {
            let row: Vec<String> = a.row(r).iter().map(|v| v.to_string()).collect();
            writeln!(f, "{}", row.join(" ")).unwrap();
        }
    }
    f
}

#[test]
fn dims_q8_matches_catalog() {
    let (code, out, _) = call("dims --group Q8 --p 2 --max-deg 7 --format csv");
    assert_eq!(code, 0);
    let rows: Vec<&str> = out.lines().skip(1).collect();
    assert_eq!(rows.len(), 8);
    assert_eq!(rows[3], "3,1,1,true");
    assert!(rows.iter().all(|r| r.ends_with("true")));
}

#[test]
fn dims_maschke() {
    let (code, out, _) = call("dims --group Z3 --p 2 --max-deg 4 --format json");
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["dims"], serde_json::json!([1, 0, 0, 0, 0]));
}

#[test]
fn bad_group_file() {
    let mut f = NamedTempFile::new().unwrap();
    writeln!(f, "name bad\ndegree 3\ngen [0,0,1]").unwrap();
    let (code, _, err) = call(&format!("dims --group file:{} --p 2", f.path().display()));
    assert_eq!(code, 1);
    assert!(err.contains("not a permutation"));
}

#[test]
fn group_file_roundtrip() {
    let mut f = NamedTempFile::new().unwrap();
    writeln!(f, "# cyclic of order 4\nname C4\ndegree 4\ngen [1,2,3,0]").unwrap();
    let (code, out, _) = call(&format!(
        "dims --group file:{} --p 2 --max-deg 3 --format csv",
        f.path().display()
    ));
    assert_eq!(code, 0);
    assert_eq!(out, "i,dim,expected,match\n0,1,,\n1,1,,\n2,1,,\n3,1,,\n");
    let (code, _, _) = call(&format!(
        "dims --group file:{} --p 2 --cap 3",
        f.path().display()
    ));
    assert_eq!(code, 1);
}

#[test]
fn input_errors() {
    assert_eq!(call("dims --group Nope --p 2").0, 1);
    assert_eq!(call("dims --group Q8 --p 4").0, 1);
    assert_eq!(call("dims --p 2").0, 1);
    assert_eq!(call("frobnicate").0, 1);
    assert_eq!(call("maps --group Z4 --p 2 --sub order:3").0, 1);
    assert_eq!(call("maps --group Z4 --p 2 --sub sylow:x").0, 1);
}

#[test]
fn poincare_fits() {
    for (args, num) in [
        ("poincare --group D8 --p 2 --den 1,1", "1"),
        ("poincare --group Q8 --p 2 --den 4", "1+2t+2t^2+t^3"),
        ("poincare --group Z2 --p 2 --den 1", "1"),
    ] {
        let (code, out, _) = call(args);
        assert_eq!(code, 0, "{args}");
        assert!(
            out.lines().any(|l| l == format!("numerator {num}")),
            "{out}"
        );
    }
    assert_eq!(call("poincare --group D8 --p 2 --den 2").0, 3);
    let (code, out, _) = call("poincare --group A4 --p 2 --format json");
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["pole_order"], 2);
}

#[test]
fn maps_reports() {
    let (code, out, _) = call("maps --group A4 --p 2 --sub sylow:2 --max-deg 5 --format csv");
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 7);
    assert!(out
        .lines()
        .skip(1)
        .all(|l| l.split(',').nth(5) == Some("true")));
    let (code, out, _) = call("maps --group Z4 --p 2 --sub order:2 --max-deg 4 --format csv");
    assert_eq!(code, 0);
    assert!(out
        .lines()
        .skip(1)
        .all(|l| l.split(',').nth(5) == Some("true")));
    let (code, out, _) = call("maps --group S4 --p 2 --sub sylow:2 --dcheck --format csv");
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 5);
    assert!(out.lines().skip(1).all(|l| l.ends_with(",true")));
    assert_eq!(call("maps --group D8 --p 2 --sub 1").0, 0);
}

#[test]
fn actions_reports() {
    let (code, out, _) = call("actions --group Q8 --format json");
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    for k in [
        "swan_ok",
        "mtw_ok",
        "twop_milnor_ok",
        "twop_cyclic_ok",
        "wolf_pq_ok",
        "periodic_ok",
    ] {
        assert_eq!(v[k], true, "{k}");
    }
    let (_, out, _) = call("actions --group D6 --format json");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["mtw_ok"], false);
    let (_, out, _) = call("actions --group Z12 --format csv");
    let row = out.lines().nth(1).unwrap();
    assert!(row.starts_with("Z12,12,true,true,true,true,true,true,true,1,"));
}

#[test]
fn module_tasks() {
    let g = lookup("D8").unwrap().build().unwrap();
    let reg = module_file(&regular_module(&g, 2));
    let triv = module_file(&trivial_module(&g, 2, 1));
    let path = |f: &NamedTempFile| f.path().display().to_string();
    let csv = |args: String| {
        let (code, out, _) = call(&args);
        assert_eq!(code, 0, "{args}");
        out.lines().nth(1).unwrap().to_string()
    };
    assert_eq!(
        csv(format!(
            "module --group D8 --module {} --task projective --format csv",
            path(&reg)
        )),
        "projective,8,2,true,2,true"
    );
    assert_eq!(
        csv(format!(
            "module --group D8 --module {} --task complexity --format csv",
            path(&reg)
        )),
        "complexity,8,2,0,12,"
    );
    assert_eq!(
        csv(format!(
            "module --group D8 --module {} --task projective --format csv",
            path(&triv)
        )),
        "projective,1,2,false,2,true"
    );
    assert_eq!(
        csv(format!(
            "module --group D8 --module {} --task complexity --format csv",
            path(&triv)
        )),
        "complexity,1,2,2,12,"
    );

    let q8 = lookup("Q8").unwrap().build().unwrap();
    let perm = module_file(&permutation_module(&q8, &center(&q8), 2));
    assert_eq!(
        csv(format!(
            "module --group Q8 --module {} --task chouinard --format csv",
            path(&perm)
        )),
        "chouinard,4,2,false,2,true"
    );

    let mut bad = NamedTempFile::new().unwrap();
    writeln!(bad, "p 2\ndim 1\nmat\n0\nmat\n1").unwrap();
    assert_eq!(
        call(&format!(
            "module --group D8 --module {} --task projective",
            path(&bad)
        ))
        .0,
        1
    );
    let mut wrong = NamedTempFile::new().unwrap();
    writeln!(wrong, "p 2\ndim 2\nmat\n0 1\n1 0").unwrap();
    assert_eq!(
        call(&format!(
            "module --group D8 --module {} --task projective",
            path(&wrong)
        ))
        .0,
        1
    );
}

#[test]
fn deterministic_output() {
    let a = call("actions --group A4 --format json");
    let b = call("actions --group A4 --format json");
    assert_eq!(a, b);
}
