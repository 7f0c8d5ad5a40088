mod common;

use gbcodes::report::{breakeven, build_report, merge_csvs, Breakeven};
use gbcodes::search::{catalog, catalog_entry, search_base_codes, LerScreen, SearchFilter};
use gbcodes::sim::{member_labels, p_grid, sweep, to_csv};
use gbcodes::{dimension_gcd, extend_family, DecoderConfig, ExtensionPlan, SimOptions, StopRule};

#[test]
fn distance_three_codes_at_five_beat_the_line() {
    let filter = SearchFilter {
        require_distance: Some(3),
        ler_screen: Some(LerScreen::new(0.010, 0.020)),
        seed: 3,
        ..SearchFilter::new(5)
    };
    let res = search_base_codes(&filter).unwrap();
    assert!(res.passed_distance > 0);
    assert_eq!(res.passed_ler, res.passed_distance);
    assert!(res.hits.iter().any(|h| h.a.to_string() == "1+x^4" && h.b.to_string() == "1+x+x^2+x^4"));
    assert!(res.hits.iter().all(|h| h.d == Some(3) && h.ler.unwrap() < 0.020));
}

#[test]
fn search_is_deterministic_and_ranked() {
    let filter = SearchFilter { require_distance: Some(2), ..SearchFilter::new(4) };
    let a = search_base_codes(&filter).unwrap();
    let b = search_base_codes(&SearchFilter { exec: gbcodes::Execution::Sequential, ..filter.clone() }).unwrap();
    assert_eq!(a.hits, b.hits);
    assert_eq!((a.positive_dim, a.passed_distance), (b.positive_dim, b.passed_distance));
    for w in a.hits.windows(2) {
        let key = |h: &gbcodes::search::SearchHit| (std::cmp::Reverse(h.d), h.w_r, h.pair_index);
        assert!(key(&w[0]) <= key(&w[1]));
    }
}

#[test]
fn catalog_entries_match_listing() {
    let entries = catalog();
    assert_eq!(entries.len(), 6);
    let c = catalog_entry(7).unwrap();
    assert_eq!((c.a, c.b), ("1+x^3", "1+x+x^3+x^6"));
    let e = catalog_entry(9).unwrap();
    assert_eq!((e.a, e.b), ("1+x^2", "1+x^5"));
    for e in entries {
        let code = e.build().unwrap();
        assert_eq!(dimension_gcd(code.a(), code.b()).unwrap(), 2);
        // g(x) = 1 + x for every entry
        let g = code.a().poly().gcd(code.b().poly()).unwrap().gcd(&gbcodes::Poly::x_pow_plus_one(e.ell)).unwrap();
        assert_eq!(g.to_string(), "1+x");
    }
}

#[test]
fn catalog_family_breakeven_per_member() {
    let base = catalog_entry(5).unwrap().build().unwrap();
    let plan = ExtensionPlan::identity(&base, 2).unwrap();
    let fam: Vec<_> = member_labels(5, &[1, 2]).into_iter().zip(extend_family(&plan).unwrap()).collect();
    let grid = p_grid(0.02, 0.20, 0.06).unwrap();
    let opts = SimOptions { trials: 3_000, stop: StopRule::Fixed, seed: 8, ..SimOptions::default() };
    let points: Vec<_> = sweep(&fam, &grid, None, &DecoderConfig::default(), &opts)
        .unwrap()
        .into_iter()
        .map(|r| r.point)
        .collect();
    for (label, _) in &fam {
        assert!(matches!(breakeven(&points, label), Breakeven::At { .. }), "{label}");
    }
    let csv = to_csv(&points);
    let merged = merge_csvs(&[csv.clone(), csv.clone()]).unwrap();
    assert_eq!(to_csv(&merged), csv);
    let report = build_report(merged).unwrap();
    assert_eq!(report.breakeven.len(), 2);
    assert!(merge_csvs::<String>(&[]).is_err());
}
