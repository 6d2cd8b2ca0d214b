use crate::error::{Error, Result};
use crate::lattice::EvenLattice;
use crate::linalg::IntMatrix;

/// Built-in lattices: `(name, aliases, gram)`.
const ENTRIES: &[(&str, &[&str])] = &[
    ("A1", &[]),
    ("A2", &[]),
    ("2A1", &["diag(2,2)"]),
    ("diag(2,4)", &[]),
    ("Q7", &["[[2,1],[1,4]]"]),
    ("3A1", &["diag(2,2,2)"]),
    ("A3", &[]),
    ("D4", &[]),
    ("E8", &[]),
];

fn gram_of(name: &str) -> IntMatrix {
    let diag = |v: &[i64]| -> IntMatrix {
        (0..v.len())
            .map(|i| (0..v.len()).map(|j| if i == j { v[i] } else { 0 }).collect())
            .collect()
    };
    match name {
        "A1" => vec![vec![2]],
        "A2" => vec![vec![2, 1], vec![1, 2]],
        "2A1" => diag(&[2, 2]),
        "diag(2,4)" => diag(&[2, 4]),
        "Q7" => vec![vec![2, 1], vec![1, 4]],
        "3A1" => diag(&[2, 2, 2]),
        "A3" => vec![vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]],
        "D4" => vec![
            vec![2, -1, 0, 0],
            vec![-1, 2, -1, -1],
            vec![0, -1, 2, 0],
            vec![0, -1, 0, 2],
        ],
        "E8" => {
            // Bourbaki labelling; node 2 attaches to node 4.
            let edges = [(0, 2), (1, 3), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7)];
            let mut g = diag(&[2; 8]);
            for (a, b) in edges {
                g[a][b] = -1;
                g[b][a] = -1;
            }
            g
        }
        _ => unreachable!("unknown catalog entry {name}"),
    }
}

pub fn names() -> Vec<&'static str> {
    ENTRIES.iter().map(|(n, _)| *n).collect()
}

/// Canonical name for a catalog name or alias.
pub fn canonical_name(name: &str) -> Option<&'static str> {
    let key: String = name.chars().filter(|c| !c.is_whitespace()).collect();
    ENTRIES
        .iter()
        .find(|(n, aliases)| n.eq_ignore_ascii_case(&key) || aliases.contains(&key.as_str()))
        .map(|(n, _)| *n)
}

pub fn lookup(name: &str) -> Result<EvenLattice> {
    let canonical = canonical_name(name).ok_or_else(|| Error::Parse(format!("unknown catalog lattice '{name}'")))?;
    EvenLattice::new(gram_of(canonical))
}
