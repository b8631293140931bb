use branchdiv::algebra::parse::{parse_expression, ParseErrorKind, Parsed};

fn kind_name(k: &ParseErrorKind) -> &'static str {
    match k {
        ParseErrorKind::Syntax => "Syntax",
        ParseErrorKind::UnknownSymbol => "UnknownSymbol",
        ParseErrorKind::Homogeneity => "Homogeneity",
        ParseErrorKind::DivisionByZero => "DivisionByZero",
    }
}

fn parse(s: &str) -> Parsed {
    parse_expression(s, &Default::default()).unwrap_or_else(|e| panic!("{s}: {e}"))
}

#[test]
fn conformance_file() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../docs/grammar_conformance.txt");
    let text = std::fs::read_to_string(path).unwrap();
    let mut cases = 0;
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = line.split('|').map(str::trim).collect();
        cases += 1;
        match cols[0] {
            "form" => {
                let Parsed::Form(f) = parse(cols[1]) else { panic!("{line}: not a form") };
                assert_eq!(f.to_string(), cols[2], "{line}");
                assert_eq!(parse(&f.to_string()), Parsed::Form(f), "{line}: reparse");
            }
            "ratio" => {
                let got = parse(cols[1]);
                let Parsed::Ratio(n, d) = &got else { panic!("{line}: not a ratio") };
                assert_eq!((n.to_string().as_str(), d.to_string().as_str()), (cols[2], cols[3]), "{line}");
                assert_eq!(parse(&format!("({n})/({d})")), got, "{line}: reparse");
            }
            "error" => {
                let e = parse_expression(cols[1], &Default::default()).expect_err(line);
                assert_eq!(kind_name(&e.kind), cols[2], "{line}");
                assert_eq!(e.pos.to_string(), cols[3], "{line}");
            }
            other => panic!("unknown case tag {other}"),
        }
    }
    assert!(cases >= 20);
}
