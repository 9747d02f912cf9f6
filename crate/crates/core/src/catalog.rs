//! Named quivers used throughout the examples and tests.

use crate::quiver::Quiver;

/// `1 → 2 → 4`, `1 → 3 → 4`.
pub fn square() -> Quiver {
    Quiver::numbered(4, &[(1, 2), (1, 3), (2, 4), (3, 4)]).expect("static quiver")
}

/// Six vertices; odd vertices are sources, even vertices are sinks.
pub fn sun() -> Quiver {
    Quiver::numbered(6, &[(1, 2), (3, 2), (3, 4), (5, 4), (5, 6), (1, 6)]).expect("static quiver")
}

/// Two vertices joined by two parallel arrows.
pub fn w2() -> Quiver {
    Quiver::new(["x1", "x2"], [("x1", "x2"), ("x1", "x2")]).expect("static quiver")
}

/// The single arrow `a → b`.
pub fn single_arrow() -> Quiver {
    Quiver::new(["a", "b"], [("a", "b")]).expect("static quiver")
}

/// The star with `s` sources `1..=s` all pointing at vertex `s + 1`.
pub fn horn(s: usize) -> Quiver {
    let arrows: Vec<(usize, usize)> = (1..=s).map(|x| (x, s + 1)).collect();
    Quiver::numbered(s + 1, &arrows).expect("static quiver")
}

pub fn by_name(name: &str) -> Option<Quiver> {
    match name {
        "square" => Some(square()),
        "sun" => Some(sun()),
        "w2" => Some(w2()),
        "a-b" | "arrow" => Some(single_arrow()),
        _ => name.strip_prefix("horn").and_then(|s| s.parse::<usize>().ok()).map(horn),
    }
}
