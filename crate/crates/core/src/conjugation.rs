//! Conjugation trajectories: repeatedly rewriting a morphism `phi` between
//! two substitution subshifts as `rho_inverse . phi . tau`, watching the
//! window shrink toward a small recurrent set of tables.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::dill::{almost_inverse, compose, invariants, DillTable, InvariantsConfig};
use crate::error::{Error, Result};
use crate::recognizer::{build_recognizer, DEFAULT_COVERAGE_FACTOR, DEFAULT_MAX_RADIUS};
use crate::spectra::eigenvalues_match;
use crate::substitution::{FactorLanguage, Substitution};
use crate::words::{Letter, Word};

/// Depth of the periodicity screen applied to both subshifts.
const APERIODICITY_DEPTH: usize = 64;

/// One recorded trajectory step.
#[derive(Debug, Clone)]
pub struct TrajectoryStep {
    pub index: usize,
    pub table: DillTable,
    pub max_output: usize,
    pub z_estimate: f64,
    pub d_observed: f64,
    pub hash: u64,
}

/// How a trajectory run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrajectoryEnd {
    /// The table at `entry` reappeared `period` steps later.
    Cycle { entry: usize, period: usize },
    /// No repeat within the step budget.
    Budget,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub steps: Vec<TrajectoryStep>,
    pub end: TrajectoryEnd,
}

#[derive(Debug, Clone, Copy)]
pub struct TrajectoryConfig {
    /// Maximum number of recorded steps, including the starting map.
    pub max_steps: usize,
    /// Length of the sample prefix used for the per-step measurements.
    pub horizon: usize,
    /// Refinement tolerance handed to the eigenvalue comparison.
    pub tol: f64,
}

impl Default for TrajectoryConfig {
    fn default() -> Self {
        TrajectoryConfig {
            max_steps: 64,
            horizon: 1 << 14,
            tol: 1e-9,
        }
    }
}

/// FNV-1a over arbitrary bytes; used to fingerprint canonical tables.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h = 0xcbf2_9ce4_8422_2325u64;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// The shift power `x -> x[n..]` as a dill table over the admissible
/// windows of `lang`; `n = 0` gives the identity.
pub fn shift_map(lang: &mut FactorLanguage, n: usize) -> Result<DillTable> {
    let alphabet = lang.substitution().alphabet().clone();
    let entries: BTreeMap<Word, Word> = lang
        .block_words(n + 1)?
        .iter()
        .map(|w| (w.clone(), alloc::vec![w[n]]))
        .collect();
    DillTable::new(alphabet.clone(), alphabet, n, entries)
}

fn step_info(index: usize, table: &DillTable, x: &[Letter]) -> Result<TrajectoryStep> {
    let inv = invariants(table, x, &InvariantsConfig::default())?;
    let max_output = table.entries().map(|(_, out)| out.len()).max().unwrap_or(0);
    Ok(TrajectoryStep {
        index,
        max_output,
        z_estimate: inv.z_estimate,
        d_observed: inv.d_observed,
        hash: fnv1a64(table.dump().as_bytes()),
        table: table.clone(),
    })
}

/// Runs the rewriting trajectory of `phi : X_tau -> X_rho`.
///
/// Each step replaces the current map `f` by `rho_inverse . f . tau`, both
/// compositions taken over the factor language of `tau` and canonicalized,
/// and stops when a table repeats or the step budget runs out.  Requires
/// both substitutions primitive and aperiodic with matching dominant
/// eigenvalues, since only then does the rewriting preserve the expansion
/// rate of the morphism.
pub fn trajectory(
    phi: &DillTable,
    tau: &Substitution,
    rho: &Substitution,
    cfg: &TrajectoryConfig,
) -> Result<Trajectory> {
    if phi.domain() != tau.alphabet() || phi.codomain() != rho.alphabet() {
        return Err(Error::invalid("morphism alphabets do not match the subshifts"));
    }
    if !tau.is_primitive() || !rho.is_primitive() {
        return Err(Error::unsupported("both substitutions must be primitive"));
    }
    let mut lang_tau = FactorLanguage::new(tau)?;
    let mut lang_rho = FactorLanguage::new(rho)?;
    if !lang_tau.is_aperiodic(APERIODICITY_DEPTH)? || !lang_rho.is_aperiodic(APERIODICITY_DEPTH)? {
        return Err(Error::unsupported("both subshifts must be aperiodic"));
    }
    if !eigenvalues_match(&tau.matrix(), &rho.matrix(), cfg.tol)? {
        return Err(Error::unsupported(
            "dominant eigenvalues differ; the rewriting would not preserve the expansion rate",
        ));
    }
    let rec = build_recognizer(rho, DEFAULT_MAX_RADIUS, DEFAULT_COVERAGE_FACTOR)?;
    let rho_inv = almost_inverse(rho, &rec, DEFAULT_COVERAGE_FACTOR)?;
    let tau_table = DillTable::from_substitution(tau);
    let seed = tau.prolongable_seed()?.0;
    let x = tau.fixed_point_prefix(seed, cfg.horizon)?;

    let mut cur = phi.canonicalize();
    let mut seen: BTreeMap<String, usize> = BTreeMap::new();
    let mut steps = Vec::new();
    let mut index = 0;
    loop {
        let dump = cur.dump();
        steps.push(step_info(index, &cur, &x)?);
        if let Some(&entry) = seen.get(&dump) {
            return Ok(Trajectory {
                steps,
                end: TrajectoryEnd::Cycle {
                    entry,
                    period: index - entry,
                },
            });
        }
        seen.insert(dump, index);
        if steps.len() >= cfg.max_steps {
            return Ok(Trajectory {
                steps,
                end: TrajectoryEnd::Budget,
            });
        }
        let advanced = compose(&cur, &tau_table, &mut lang_tau)?;
        cur = compose(&rho_inv, &advanced, &mut lang_tau)?;
        index += 1;
    }
}

/// Strips leading window letters that never influence the output,
/// returning the reduced table and the shift power it was composed with:
/// `f = reduced . shift^k`.  The trailing side is handled by
/// [`DillTable::canonicalize`], which is applied to the result.
pub fn reduce_shift(f: &DillTable) -> (DillTable, usize) {
    let radius = f.in_radius();
    for k in (1..=radius).rev() {
        let mut grouped: BTreeMap<Word, Word> = BTreeMap::new();
        let mut consistent = true;
        for (w, out) in f.entries() {
            match grouped.entry(w[k..].to_vec()) {
                alloc::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(out.clone());
                }
                alloc::collections::btree_map::Entry::Occupied(e) => {
                    if e.get() != out {
                        consistent = false;
                        break;
                    }
                }
            }
        }
        if consistent {
            let reduced = DillTable::new(
                f.domain().clone(),
                f.codomain().clone(),
                radius - k,
                grouped,
            )
            .expect("suffix windows keep valid shape");
            return (reduced.canonicalize(), k);
        }
    }
    (f.canonicalize(), 0)
}

/// Fixed-point bound for an affine recursion `r' <= a * r + b` with
/// `0 <= a < 1`: any starting radius is eventually at most `b / (1 - a)`,
/// returned with a small safety margin.
pub fn alpha_bound(a: f64, b: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&a) || !b.is_finite() || b < 0.0 {
        return Err(Error::invalid("need 0 <= a < 1 and b >= 0"));
    }
    let v = b / (1.0 - a);
    Ok(v + v.abs() * f64::EPSILON + f64::MIN_POSITIVE)
}
