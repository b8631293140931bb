use branchdiv::algebra::form::Form3;
use branchdiv::algebra::parse::{parse_expression, parse_form, Parsed};
use branchdiv::algebra::Elem;
use proptest::prelude::*;

fn form_of_degree(deg: u32) -> impl Strategy<Value = Form3> {
    let n = Form3::monomials(deg).len();
    prop::collection::vec((0..n, -30i64..=30, 1i64..=9), 1..=6).prop_map(move |terms| {
        let mons = Form3::monomials(deg);
        let mut f = Form3::zero(deg);
        for (k, num, den) in terms {
            f.add_term(mons[k], &Elem::from_ratio(num, den));
        }
        f
    })
}

fn arb_form() -> impl Strategy<Value = Form3> {
    (0u32..=4).prop_flat_map(form_of_degree)
}

/// Numerator and denominator of one positive degree, both nonzero.
fn arb_ratio() -> impl Strategy<Value = (Form3, Form3)> {
    (1u32..=3)
        .prop_flat_map(|deg| (form_of_degree(deg), form_of_degree(deg)))
        .prop_filter("nonzero parts", |(a, b)| !a.is_zero() && !b.is_zero())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn printed_forms_parse_back(f in arb_form()) {
        let text = f.to_string();
        let g = parse_form(&text, &Default::default()).unwrap();
        prop_assert_eq!(g.degree(), f.degree(), "{}", text);
        prop_assert_eq!(g, f);
    }

    #[test]
    fn printed_ratios_parse_back((a, b) in arb_ratio()) {
        let text = format!("({a})/({b})");
        match parse_expression(&text, &Default::default()) {
            Ok(Parsed::Ratio(n, d)) => {
                prop_assert_eq!(&n * &b, &a * &d);
            }
            other => prop_assert!(false, "{}: {:?}", text, other),
        }
    }
}
