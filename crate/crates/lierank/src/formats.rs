//! JSON and CSV representations of the core types.

use anyhow::{anyhow, bail, Context, Result};
use lierank_core::closure::ClosureTrace;
use lierank_core::models::Term;
use lierank_core::proxy::{ProxyEntry, ProxyModel};
use lierank_core::{HamiltonianSpec, Partition, PauliOperator, PauliString, StateVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Formats a float with 12 significant digits.
pub fn fmt12(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    let mag = rounded.abs();
    if rounded == 0.0 {
        "0".into()
    } else if (1e-5..1e15).contains(&mag) {
        rounded.to_string()
    } else {
        format!("{rounded:e}")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub string: String,
    pub coeff: f64,
}

pub fn operator_to_json(op: &PauliOperator) -> Vec<TermJson> {
    op.terms().iter().map(|(s, c)| TermJson { string: s.to_label(), coeff: *c }).collect()
}

pub fn operator_from_json(terms: &[TermJson]) -> Result<PauliOperator> {
    let first = terms.first().ok_or_else(|| anyhow!("operator has no terms"))?;
    let n = first.string.len();
    let parsed = terms
        .iter()
        .map(|t| Ok((t.string.parse::<PauliString>()?, t.coeff)))
        .collect::<Result<Vec<_>>>()?;
    Ok(PauliOperator::from_terms(n, parsed)?)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabelledTermJson {
    pub string: String,
    pub coeff: f64,
    pub label: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HamiltonianJson {
    pub n_qubits: usize,
    /// Entries sharing a label form one multi-string term.
    pub terms: Vec<LabelledTermJson>,
}

impl From<&HamiltonianSpec> for HamiltonianJson {
    fn from(spec: &HamiltonianSpec) -> Self {
        let mut terms = Vec::new();
        for t in spec.terms() {
            if t.operator.is_empty() {
                let identity = PauliString::identity(spec.n_qubits()).expect("validated qubit count");
                terms.push(LabelledTermJson { string: identity.to_label(), coeff: 0.0, label: t.label.clone() });
            }
            for (s, c) in t.operator.terms() {
                terms.push(LabelledTermJson { string: s.to_label(), coeff: *c, label: t.label.clone() });
            }
        }
        Self { n_qubits: spec.n_qubits(), terms }
    }
}

impl HamiltonianJson {
    pub fn to_spec(&self) -> Result<HamiltonianSpec> {
        let mut grouped: Vec<(String, Vec<(PauliString, f64)>)> = Vec::new();
        for t in &self.terms {
            let s: PauliString = t.string.parse().with_context(|| format!("term {:?}", t.label))?;
            if s.n_qubits() != self.n_qubits {
                bail!("term {:?} acts on {} qubits, expected {}", t.label, s.n_qubits(), self.n_qubits);
            }
            match grouped.iter_mut().find(|(l, _)| *l == t.label) {
                Some((_, list)) => list.push((s, t.coeff)),
                None => grouped.push((t.label.clone(), vec![(s, t.coeff)])),
            }
        }
        let terms = grouped
            .into_iter()
            .map(|(label, list)| Ok(Term { label, operator: PauliOperator::from_terms(self.n_qubits, list)? }))
            .collect::<Result<Vec<_>>>()?;
        Ok(HamiltonianSpec::new(self.n_qubits, terms)?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartitionJson {
    pub n_items: usize,
    pub blocks: Vec<Vec<usize>>,
}

impl From<&Partition> for PartitionJson {
    fn from(p: &Partition) -> Self {
        Self { n_items: p.n_items(), blocks: p.blocks().to_vec() }
    }
}

impl PartitionJson {
    pub fn to_partition(&self) -> Result<Partition> {
        Ok(Partition::new(self.n_items, self.blocks.clone())?)
    }

    /// Compact single-line form for CSV cells.
    pub fn compact(p: &Partition) -> String {
        serde_json::to_string(&PartitionJson::from(p)).expect("partition serializes")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceJson {
    pub n_qubits: usize,
    pub rank_per_iteration: Vec<usize>,
    pub final_rank: usize,
    pub reached_cap: bool,
    pub truncated: bool,
    pub has_identity: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<Vec<TermJson>>>,
}

impl TraceJson {
    pub fn new(trace: &ClosureTrace, with_basis: bool) -> Self {
        Self {
            n_qubits: trace.n_qubits,
            rank_per_iteration: trace.rank_per_iteration.clone(),
            final_rank: trace.final_rank(),
            reached_cap: trace.reached_cap,
            truncated: trace.truncated,
            has_identity: trace.has_identity,
            basis: with_basis.then(|| trace.basis.iter().map(operator_to_json).collect()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProxyEntryJson {
    pub m: usize,
    pub a: f64,
    pub alpha: f64,
    pub beta: f64,
    pub p_min: f64,
    pub x_min: f64,
    pub nodes: Vec<(f64, f64)>,
    pub degenerate: bool,
    pub samples: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProxyModelJson {
    pub k: usize,
    pub per_m: Vec<ProxyEntryJson>,
}

impl From<&ProxyModel> for ProxyModelJson {
    fn from(model: &ProxyModel) -> Self {
        let per_m = model
            .entries
            .iter()
            .map(|e| ProxyEntryJson {
                m: e.m,
                a: e.a,
                alpha: e.alpha,
                beta: e.beta,
                p_min: e.p_min,
                x_min: e.x_min,
                nodes: e.nodes.clone(),
                degenerate: e.degenerate,
                samples: e.samples,
            })
            .collect();
        Self { k: model.k, per_m }
    }
}

impl ProxyModelJson {
    pub fn to_model(&self) -> ProxyModel {
        let entries = self
            .per_m
            .iter()
            .map(|e| ProxyEntry {
                m: e.m,
                a: e.a,
                alpha: e.alpha,
                beta: e.beta,
                p_min: e.p_min,
                x_min: e.x_min,
                nodes: e.nodes.clone(),
                degenerate: e.degenerate,
                samples: e.samples,
            })
            .collect();
        ProxyModel { k: self.k, entries }
    }
}

/// Amplitudes as `[re, im]` pairs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateJson {
    pub n_qubits: usize,
    pub amplitudes: Vec<[f64; 2]>,
}

impl From<&StateVector> for StateJson {
    fn from(s: &StateVector) -> Self {
        Self { n_qubits: s.n_qubits(), amplitudes: s.amplitudes().iter().map(|a| [a.re, a.im]).collect() }
    }
}

impl StateJson {
    pub fn to_state(&self) -> Result<StateVector> {
        let amps = self.amplitudes.iter().map(|[re, im]| Complex64::new(*re, *im)).collect();
        let state = StateVector::from_amplitudes(amps)?;
        if state.n_qubits() != self.n_qubits {
            bail!("{} amplitudes do not describe {} qubits", self.amplitudes.len(), self.n_qubits);
        }
        Ok(state)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use lierank_core::close_algebra;
    use lierank_core::models::xxz_2x2;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(fmt12(1.0), "1");
        assert_eq!(fmt12(-7.039827432171234), "-7.03982743217");
        assert_eq!(fmt12(1.0 / 3.0e-20), "3.33333333333e19");
        assert_eq!(fmt12(0.000123456789012345), "0.000123456789012");
        assert_eq!(fmt12(1e-300 / 3.0), "3.33333333333e-301");
        assert_eq!(fmt12(-0.0), "0");
    }

    #[test]
    fn hamiltonian_round_trip() {
        let spec = xxz_2x2(0.1, -2.0, 0.5).unwrap();
        let json = serde_json::to_string(&HamiltonianJson::from(&spec)).unwrap();
        let back: HamiltonianJson = serde_json::from_str(&json).unwrap();
        assert_eq!(back.to_spec().unwrap(), spec);
        assert_eq!(back.terms.len(), 16);
    }

    #[test]
    fn zero_terms_survive() {
        let spec = xxz_2x2(0.1, -2.0, 0.0).unwrap();
        let back = HamiltonianJson::from(&spec).to_spec().unwrap();
        assert_eq!(back.len(), 13);
        assert_eq!(back, spec);
    }

    #[test]
    fn mismatched_strings_are_rejected() {
        let json = r#"{"n_qubits": 2, "terms": [{"string": "XYZ", "coeff": 1.0, "label": "a"}]}"#;
        let h: HamiltonianJson = serde_json::from_str(json).unwrap();
        assert!(h.to_spec().is_err());
    }

    #[test]
    fn partition_and_trace_forms() {
        let p = Partition::new(4, vec![vec![2, 0], vec![1, 3]]).unwrap();
        assert_eq!(PartitionJson::compact(&p), r#"{"n_items":4,"blocks":[[0,2],[1,3]]}"#);
        let t = close_algebra(&[PauliOperator::from_labels(&[("X", 1.0)]).unwrap()], None).unwrap();
        let j = serde_json::to_value(TraceJson::new(&t, false)).unwrap();
        assert_eq!(j["final_rank"], 1);
        assert!(j.get("basis").is_none());
        let with = TraceJson::new(&t, true);
        assert_eq!(operator_from_json(&with.basis.unwrap()[0]).unwrap(), t.basis[0]);
    }
}
