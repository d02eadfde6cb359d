//! Shipped example systems.
//!
//! * `p3`: `X = {0,1,2}`, `σ_i(j) = i` if `j = i`, else `0`. Has the proper
//!   invariant set `{0}` but no proper bi-invariant set.
//! * `fs2`: `X = {a,b}`, `σ_1 ≡ a`, `σ_2 ≡ b`.
//! * `sw2`: `X = {a,b}`, `σ_1 = id`, `σ_2` swaps.
//! * `ns`: `X = {0,1}`, `σ_1 = σ_2 ≡ 0`; not surjective.
//! * `point1`, `point2`: one point with one or two identity maps.

use crate::dynsys::FiniteDynSys;

pub const NAMES: [&str; 6] = ["p3", "fs2", "sw2", "ns", "point1", "point2"];

pub fn source(name: &str) -> Option<&'static str> {
    Some(match name {
        "p3" => include_str!("../data/p3.json"),
        "fs2" => include_str!("../data/fs2.json"),
        "sw2" => include_str!("../data/sw2.json"),
        "ns" => include_str!("../data/ns.json"),
        "point1" => include_str!("../data/point1.json"),
        "point2" => include_str!("../data/point2.json"),
        _ => return None,
    })
}

pub fn get(name: &str) -> Option<FiniteDynSys> {
    source(name).map(|s| FiniteDynSys::from_json(s).expect("shipped systems are valid"))
}

pub fn all() -> Vec<FiniteDynSys> {
    NAMES.iter().map(|n| get(n).expect("known name")).collect()
}

pub fn p3() -> FiniteDynSys {
    get("p3").unwrap()
}

pub fn fs2() -> FiniteDynSys {
    get("fs2").unwrap()
}

pub fn sw2() -> FiniteDynSys {
    get("sw2").unwrap()
}

pub fn ns() -> FiniteDynSys {
    get("ns").unwrap()
}

pub fn point1() -> FiniteDynSys {
    get("point1").unwrap()
}

pub fn point2() -> FiniteDynSys {
    get("point2").unwrap()
}
