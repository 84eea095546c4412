mod common;

use bibops::secondorder::{op_alsoread, op_citations, op_references};
use common::*;

#[test]
fn operators_match_brute_force_on_random_corpora() {
    for seed in 0..60 {
        check_world(seed);
    }
}

#[test]
fn tiny_worlds_hit_edge_cases() {
    // one document, few users, few edges
    for seed in 1000..1100 {
        let world = random_world(seed, 2, 2, 3);
        let input = random_input(&world, seed, true);
        let ids: Vec<String> = input.ids().map(str::to_owned).collect();
        assert_matches(
            &op_references(&input, &world.graph, 5, true),
            &oracle_references(&world, &ids, 5, true),
            "op_references",
        );
        assert_matches(
            &op_citations(&input, &world.graph, 5),
            &oracle_citations(&world, &ids, 5),
            "op_citations",
        );
        assert_matches(
            &op_alsoread(&input, &world.coread, 5),
            &oracle_alsoread_op(&world, &ids, 5),
            "op_alsoread",
        );
    }
}

#[test]
fn find_similar_matches_abstract_query_oracle() {
    for seed in 0..40 {
        let world = random_world(seed, 30, 5, 10);
        let input = random_input(&world, seed + 7, false);
        let seeds: Vec<String> = input.ids().map(str::to_owned).collect();
        let got = world
            .index
            .find_similar(&seeds, Some(1993), None, 25)
            .unwrap();

        let text: String = seeds
            .iter()
            .map(|s| world.corpus.get(s).unwrap().abstract_text.clone() + " ")
            .collect();
        let q = bibops::Query::abstract_text(text)
            .with_years(Some(1993), None)
            .with_limit(usize::MAX);
        let all = oracle_search(&world, &q).0;
        let kept: Vec<(String, f64)> = all
            .into_iter()
            .filter(|(id, _)| !seeds.contains(id))
            .collect();
        let expected = oracle_rank(kept, 25);
        assert_matches(&got, &expected, "find_similar");
        assert!(got.ids().all(|id| !seeds.iter().any(|s| s == id)));
    }
}

#[test]
fn oracle_sees_the_same_window_as_the_index() {
    for seed in 0..30 {
        let world = random_world(seed, 20, 10, 0);
        let pairs = oracle_window_reads(&world);
        for d in &world.docs {
            let mut got: Vec<&str> = world.coread.readers_of(&d.id).collect();
            got.sort_unstable();
            let want: Vec<&str> = pairs
                .iter()
                .filter(|(_, doc)| doc == &d.id)
                .map(|(u, _)| u.as_str())
                .collect();
            assert_eq!(got, want, "readers of {}", d.id);
        }
    }
}
