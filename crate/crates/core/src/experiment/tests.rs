use super::*;

fn grid_scenario(dims: Vec<usize>, setting: Setting, kind: QueryKind, oracle: OracleMode, reps: usize) -> Scenario {
    Scenario {
        id: "t".into(),
        graph: GraphFamily::Grid { dims },
        setting,
        kind,
        searcher: SearcherName::Bisection,
        oracle,
        repetitions: reps,
        seed: Some(7),
        source: 0,
    }
}

#[test]
fn seeded_grid_example() {
    let s = grid_scenario(vec![8, 8], Setting::S1, QueryKind::B, OracleMode::SeededRandom, 100);
    let records = run(&s).unwrap();
    assert_eq!(records.len(), 100);
    for r in &records {
        assert!(r.correct);
        assert_eq!(r.upper_bound.as_deref(), Some("56/3"));
        assert_eq!(r.corrected_upper_bound.as_deref(), Some("24"));
    }
}

#[test]
fn path_adversary_example() {
    let s = Scenario {
        id: "p".into(),
        graph: GraphFamily::Path { n: 8 },
        setting: Setting::S2,
        kind: QueryKind::B,
        searcher: SearcherName::Tree,
        oracle: OracleMode::Adversary,
        repetitions: 1,
        seed: None,
        source: 0,
    };
    let r = &run(&s).unwrap()[0];
    assert!(r.correct && r.passed());
    assert_eq!(r.lower_bound.as_deref(), Some("1"));
    assert!(r.queries_used >= 1 && r.queries_used <= 3);
}

#[test]
fn exhaustive_grid_is_at_least_game_value() {
    let s = Scenario { searcher: SearcherName::Separator, ..grid_scenario(vec![3, 3], Setting::S2, QueryKind::B, OracleMode::Exhaustive, 1) };
    let records = run(&s).unwrap();
    assert!(records.iter().all(|r| r.correct));
    let worst = records.iter().map(|r| r.queries_used).max().unwrap();
    let g = GridSpec::new(vec![3, 3]).unwrap().build();
    let value = crate::game::GameSolver::with_cap(&g, 0, Setting::S2, QueryKind::B, 9).unwrap().solve().value as usize;
    assert!(worst >= value);
}

#[test]
fn unsupported_combinations() {
    let bad = [
        grid_scenario(vec![4, 4], Setting::S1, QueryKind::B, OracleMode::Adversary, 1),
        grid_scenario(vec![4, 4], Setting::S2, QueryKind::A, OracleMode::Adversary, 1),
        Scenario { seed: None, ..grid_scenario(vec![4, 4], Setting::S2, QueryKind::B, OracleMode::SeededRandom, 3) },
        Scenario { graph: GraphFamily::Path { n: 5 }, ..grid_scenario(vec![4, 4], Setting::S2, QueryKind::B, OracleMode::SeededRandom, 3) },
        Scenario {
            graph: GraphFamily::Grid { dims: vec![3, 3] },
            searcher: SearcherName::Tree,
            ..grid_scenario(vec![4, 4], Setting::S2, QueryKind::B, OracleMode::SeededRandom, 3)
        },
    ];
    for s in bad {
        assert!(matches!(run(&s), Err(Error::Unsupported(_))), "{s:?}");
    }
}

#[test]
fn csv_is_reproducible_and_round_trips() {
    let s = grid_scenario(vec![4, 4], Setting::S2, QueryKind::B, OracleMode::SeededRandom, 30);
    let a = records_csv(&run(&s).unwrap()).unwrap();
    let b = records_csv(&run(&s).unwrap()).unwrap();
    assert_eq!(a, b);
    let back = read_records(a.as_bytes()).unwrap();
    assert_eq!(back, run(&s).unwrap());
    assert!(violations(&back).unwrap().is_empty());
}

#[test]
fn tampered_flags_are_caught() {
    let s = grid_scenario(vec![4, 4], Setting::S2, QueryKind::B, OracleMode::SeededRandom, 3);
    let mut records = run(&s).unwrap();
    records[1].upper_bound = Some("0".into());
    assert_eq!(violations(&records).unwrap().len(), 1);
}

#[test]
fn report_summarizes_per_scenario() {
    let mut a = grid_scenario(vec![4, 4], Setting::S2, QueryKind::B, OracleMode::SeededRandom, 10);
    let mut b = a.clone();
    a.id = "a".into();
    b.id = "b".into();
    b.graph = GraphFamily::Grid { dims: vec![8, 8] };
    let rows = report(&run_all(&[a, b]).unwrap());
    assert_eq!(rows.iter().map(|r| (r.scenario.as_str(), r.runs)).collect::<Vec<_>>(), vec![("a", 10), ("b", 10)]);
    assert!(rows.iter().all(|r| r.min <= r.max));
}

#[test]
fn scenario_json() {
    let text = r#"{"id":"x","graph":{"family":"grid","dims":[4,4]},"setting":"S2","kind":"B","searcher":"bisection","oracle":"seeded_random","repetitions":5,"seed":3}"#;
    let s = Scenario::from_json(text).unwrap();
    assert_eq!(s.len(), 1);
    assert_eq!(s[0].source, 0);
    assert_eq!(run(&s[0]).unwrap().len(), 5);
}


#[test]
fn graph_shorthand() {
    assert_eq!("grid:4x4x2".parse::<GraphFamily>().unwrap(), GraphFamily::Grid { dims: vec![4, 4, 2] });
    assert_eq!("star:3".parse::<GraphFamily>().unwrap().build().unwrap().vertex_count(), 4);
    for text in ["grid:4x4x2", "path:8", "tree:15", "star:3", "complete:4", "cycle:5"] {
        assert_eq!(text.parse::<GraphFamily>().unwrap().to_string(), text);
    }
    assert!("grid:4y4".parse::<GraphFamily>().is_err());
    assert!("blob:3".parse::<GraphFamily>().is_err());
}

#[test]
fn tree_half_separator_matches_exact() {
    for n in 1..=14 {
        for g in [Graph::path(n), Graph::binary_tree(n)] {
            assert_eq!(half_separator_size(&g).unwrap(), tree_half_separator(n), "n={n}");
        }
    }
    assert_eq!(half_separator_size(&Graph::star(6)).unwrap(), 1);
}
