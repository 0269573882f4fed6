use std::collections::HashMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{CouplingParams, LatticePatch};
use crate::linalg::{full_spectrum, LinearMap, SpectrumReport, DEFAULT_CLUSTER_TOLERANCE};
use crate::pauli::PauliString;
use crate::spin_boson::hamiltonian::{build_effective_hamiltonian, Calibration};
use crate::spin_boson::local::{decode_index, encode_index};

/// Largest cluster accepted by [`verify_mapping_equivalence`].
pub const EQUIVALENCE_TRIANGLE_LIMIT: usize = 4;

/// Effective basis index of a microscopic basis state (site-major).
pub fn encode_global(micro: usize, sites: usize) -> usize {
    let mut out = 0;
    for s in 0..sites {
        out |= encode_index((micro >> (3 * s)) & 7) << (3 * s);
    }
    out
}

pub fn decode_global(effective: usize, sites: usize) -> usize {
    let mut out = 0;
    for s in 0..sites {
        out |= decode_index((effective >> (3 * s)) & 7) << (3 * s);
    }
    out
}

/// `U P U†` applied to an effective basis state.
pub fn conjugated_string_action(
    p: &PauliString,
    effective: usize,
    sites: usize,
) -> Result<(usize, Complex64)> {
    let mut bits = vec![0u64; p.x_words().len()];
    if bits.is_empty() {
        return Ok((effective, p.phase().to_complex()));
    }
    bits[0] = decode_global(effective, sites) as u64;
    let ph = p.act_on_basis(&mut bits)?;
    Ok((encode_global(bits[0] as usize, sites), ph.to_complex()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub sites: usize,
    pub dimension: usize,
    pub calibration: Calibration,
    /// Largest entry of `U H U† / (4 J_z) − H_eff`.
    pub matrix_deviation: f64,
    /// Largest gap between the microscopic spectrum and the calibrated
    /// effective spectrum.
    pub spectral_deviation: f64,
    /// Mean of `E_micro − scale·E_eff`; zero when no constant is missing.
    pub residual_offset: f64,
    pub micro_spectrum: SpectrumReport,
    /// In the effective frame.
    pub effective_spectrum: SpectrumReport,
}

/// Conjugates the microscopic Hamiltonian of `cluster` with the triangle
/// isometry and compares it to the effective model entry by entry and
/// spectrally.
pub fn verify_mapping_equivalence(
    cluster: &LatticePatch,
    j: &CouplingParams,
) -> Result<EquivalenceReport> {
    let n = cluster.num_sites();
    if n > EQUIVALENCE_TRIANGLE_LIMIT {
        return Err(Error::Capacity {
            what: "triangles for the equivalence oracle",
            size: n,
            limit: EQUIVALENCE_TRIANGLE_LIMIT,
        });
    }
    let heff = build_effective_hamiltonian(cluster, j)?;
    let micro = cluster.hamiltonian(j)?;
    let scale = heff.calibration.scale;
    let dim = 1usize << (3 * n);

    let mut deviation: f64 = 0.0;
    let mut buf = Vec::new();
    for col in 0..dim {
        let mut acc: HashMap<usize, Complex64> = HashMap::new();
        buf.clear();
        micro.column(decode_global(col, n), &mut buf);
        for &(row, v) in &buf {
            *acc.entry(encode_global(row, n)).or_default() += v / scale;
        }
        buf.clear();
        heff.operator.column(col, &mut buf);
        for &(row, v) in &buf {
            *acc.entry(row).or_default() -= v;
        }
        for v in acc.values() {
            deviation = deviation.max(v.norm());
        }
    }

    let micro_spectrum = full_spectrum(&micro, DEFAULT_CLUSTER_TOLERANCE)?;
    let effective_spectrum = full_spectrum(&heff.operator, DEFAULT_CLUSTER_TOLERANCE)?;
    let a = micro_spectrum.expanded();
    let b: Vec<f64> = effective_spectrum
        .expanded()
        .iter()
        .map(|e| scale * e)
        .collect();
    let spectral_deviation = a
        .iter()
        .zip(&b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    let residual_offset = a.iter().zip(&b).map(|(x, y)| x - y).sum::<f64>() / a.len() as f64;
    Ok(EquivalenceReport {
        sites: n,
        dimension: dim,
        calibration: heff.calibration,
        matrix_deviation: deviation,
        spectral_deviation,
        residual_offset,
        micro_spectrum,
        effective_spectrum,
    })
}
