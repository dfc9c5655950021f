//! Seeded random minimal graphs.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::ResolutionGraph;

/// Extra weight above `max(2, v)`: 0 with probability .55, 1 with .25,
/// 2 with .12, 3 with .08.
fn excess(rng: &mut ChaCha8Rng) -> u32 {
    match rng.random_range(0..100) {
        0..55 => 0,
        55..80 => 1,
        80..92 => 2,
        _ => 3,
    }
}

/// Edges of the labeled tree with the given Prüfer sequence on `n` vertices.
fn prufer_tree(seq: &[usize], n: usize) -> Vec<(usize, usize)> {
    let mut degree = vec![1usize; n];
    for &s in seq {
        degree[s] += 1;
    }
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    for &s in seq {
        let leaf = (0..n).find(|&v| degree[v] == 1).expect("a leaf remains");
        edges.push((leaf, s));
        degree[leaf] -= 1;
        degree[s] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    if let [a, b] = rest[..] {
        edges.push((a, b));
    }
    edges
}

/// Uniform vertex count in `1..=max_vertices`, uniform labeled tree, weights
/// `max(2, v) + excess`. Valid by construction and deterministic per seed.
pub fn gen_random_minimal(seed: u64, max_vertices: usize) -> ResolutionGraph {
    assert!(max_vertices >= 1, "need at least one vertex");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(1..=max_vertices);
    let edges = if n >= 2 {
        let seq: Vec<usize> = (0..n - 2).map(|_| rng.random_range(0..n)).collect();
        prufer_tree(&seq, n)
    } else {
        Vec::new()
    };
    let mut valence = vec![0u32; n];
    for &(a, b) in &edges {
        valence[a] += 1;
        valence[b] += 1;
    }
    let width = (n - 1).to_string().len().max(2);
    let names: Vec<String> = (0..n).map(|i| format!("v{i:0width$}")).collect();
    let vertices: Vec<(&str, u32)> = (0..n)
        .map(|i| (names[i].as_str(), valence[i].max(2) + excess(&mut rng)))
        .collect();
    let edges: Vec<(&str, &str)> = edges
        .iter()
        .map(|&(a, b)| (names[a].as_str(), names[b].as_str()))
        .collect();
    ResolutionGraph::new(&vertices, &edges).expect("generated tree is well formed")
}

/// Per-case seeds drawn from a master generator.
pub fn case_seeds(master: u64, count: usize) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    (0..count).map(|_| rng.next_u64()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        assert_eq!(gen_random_minimal(42, 10), gen_random_minimal(42, 10));
        assert_eq!(case_seeds(42, 5), case_seeds(42, 5));
        assert_ne!(case_seeds(42, 2)[0], case_seeds(42, 2)[1]);
    }

    #[test]
    fn always_valid() {
        for s in case_seeds(7, 300) {
            let g = gen_random_minimal(s, 12);
            assert!(g.validate_minimal().is_empty(), "{g}");
            assert!(g.vertex_count() <= 12);
        }
    }

    #[test]
    fn reduced_and_non_reduced_both_occur() {
        let graphs: Vec<_> = case_seeds(42, 200).into_iter().map(|s| gen_random_minimal(s, 10)).collect();
        assert!(graphs.iter().any(|g| g.is_reduced()));
        assert!(graphs.iter().any(|g| !g.is_reduced()));
    }

    #[test]
    fn prufer_decoding() {
        // sequence (3, 3, 3) on five vertices is the star centered at 3
        let mut e = prufer_tree(&[3, 3, 3], 5);
        e.sort_unstable();
        assert_eq!(e, [(0, 3), (1, 3), (2, 3), (3, 4)]);
        assert_eq!(prufer_tree(&[], 2), [(0, 1)]);
    }
}
