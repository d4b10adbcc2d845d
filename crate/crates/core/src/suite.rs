//! Seeded end-to-end corpus: every finder run on generated hosts, every
//! result re-verified.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::catalog::{family_scheme, SchemeFamily};
use crate::digraph_finder::{
    find_apex_inarb_butterfly, find_two_block_wheel, find_wheel_subdivision, verify_butterfly,
};
use crate::generate::{inarborescence, min_degree_graph, min_outdegree_digraph};
use crate::minor::{find_apex_minor, verify_minor};
use crate::subdivision::verify_subdivision_digraph;

#[derive(Debug, Clone, Serialize)]
pub struct SuiteLine {
    pub name: String,
    pub trials: usize,
    pub passed: usize,
    /// First failure, if any.
    pub failure: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub lines: Vec<SuiteLine>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.lines.iter().all(|l| l.passed == l.trials)
    }
}

fn run(name: &str, trials: usize, mut f: impl FnMut(usize) -> Result<(), String>) -> SuiteLine {
    let mut line = SuiteLine {
        name: name.into(),
        trials,
        passed: 0,
        failure: None,
    };
    for i in 0..trials {
        match f(i) {
            Ok(()) => line.passed += 1,
            Err(e) if line.failure.is_none() => line.failure = Some(format!("trial {i}: {e}")),
            Err(_) => {}
        }
    }
    line
}

/// Runs `trials` instances per finder; deterministic in `seed`.
pub fn run_suite(seed: u64, trials: usize) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut lines = Vec::new();

    lines.push(run("apex-minor", trials, |_| {
        let t = rng.gen_range(3..=6);
        let (family, size) = match rng.gen_range(0..4) {
            0 => (SchemeFamily::Tree, t),
            1 => (SchemeFamily::Cactus, t),
            2 if t % 3 == 0 => (SchemeFamily::Snake, t),
            2 => (SchemeFamily::Tree, t),
            _ if t == 6 => (SchemeFamily::Universal, 1),
            _ => (SchemeFamily::Universal, 0),
        };
        let s = rng.gen();
        let scheme = family_scheme(family, size, s).map_err(|e| e.to_string())?;
        let k = scheme.host().vertex_count();
        let n = rng.gen_range(k + 1..=18);
        let g = min_degree_graph(n, k, s).map_err(|e| e.to_string())?;
        let cert = find_apex_minor(&g, scheme.as_ref()).map_err(|e| e.to_string())?;
        verify_minor(&g, &scheme.host().with_apex(), &cert.embedding)
    }));

    lines.push(run("apex-inarborescence-butterfly", trials, |_| {
        let t = rng.gen_range(2..=5);
        let n = rng.gen_range(t + 1..=16);
        let s = rng.gen();
        let d = min_outdegree_digraph(n, t, s).map_err(|e| e.to_string())?;
        let tree = inarborescence(t, s).map_err(|e| e.to_string())?;
        let cert = find_apex_inarb_butterfly(&d, &tree).map_err(|e| e.to_string())?;
        verify_butterfly(&d, &cert.pattern, &cert.embedding)
    }));

    lines.push(run("directed-wheel", trials, |_| {
        let t = rng.gen_range(2..=5);
        let n = rng.gen_range(t + 1..=16);
        let d = min_outdegree_digraph(n, t, rng.gen()).map_err(|e| e.to_string())?;
        let cert = find_wheel_subdivision(&d, t).map_err(|e| e.to_string())?;
        verify_subdivision_digraph(&d, &cert.pattern, &cert.embedding)?;
        for (p, e) in [cert.extract_c_plus(), cert.extract_w2()]
            .into_iter()
            .map(|r| r.map_err(|e| e.to_string()))
            .collect::<Result<Vec<_>, _>>()?
        {
            verify_subdivision_digraph(&d, &p, &e)?;
        }
        Ok(())
    }));

    lines.push(run("two-block-wheel", trials, |i| {
        let (k1, k2) = [(2, 1), (2, 2), (3, 2)][i % 3];
        let n = rng.gen_range(k1 + k2..=16);
        let d = min_outdegree_digraph(n, k1 + k2 - 1, rng.gen()).map_err(|e| e.to_string())?;
        let cert = find_two_block_wheel(&d, k1, k2).map_err(|e| e.to_string())?;
        verify_subdivision_digraph(&d, &cert.pattern, &cert.embedding)
    }));

    SuiteReport { seed, lines }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suite_passes_and_repeats() {
        let a = run_suite(3, 12);
        assert!(a.all_passed(), "{a:?}");
        let b = run_suite(3, 12);
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }
}
