//! Newform data shipped with the crate.

const SNAPSHOTS: &[(u64, &str)] = &[
    (32, include_str!("../../data/newforms/level_32.json")),
    (544, include_str!("../../data/newforms/level_544.json")),
    (2336, include_str!("../../data/newforms/level_2336.json")),
    (2848, include_str!("../../data/newforms/level_2848.json")),
    (3616, include_str!("../../data/newforms/level_3616.json")),
];

pub fn bundled_levels() -> Vec<u64> {
    SNAPSHOTS.iter().map(|(l, _)| *l).collect()
}

/// The bundled cache document for `level`, if shipped.
pub fn bundled_snapshot(level: u64) -> Option<&'static str> {
    SNAPSHOTS.iter().find(|(l, _)| *l == level).map(|(_, s)| *s)
}
