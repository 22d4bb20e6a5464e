//! Self-contained instance bundles: a machine description plus `(x, bound)`.

use serde::{Deserialize, Serialize};

use super::reduce::{HaltDetector, SinkAfter, TautologyEvaluator};
use crate::error::{Error, Result};
use crate::kleene::TritWord;
use crate::machine::{parse_tm, MachineRef, MachineSpec};
use crate::universal::TCmuxMachine;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceBundle {
    /// `pexp-bhp`, `detect1` or `detect-poly`; for `detect-poly` the bound is
    /// the exponent `c`.
    pub problem: String,
    pub machine: MachineSpec,
    pub x: TritWord,
    pub bound: u64,
}

impl InstanceBundle {
    /// DSL of the innermost table machine, if any.
    pub fn table_dsl(&self) -> Option<&str> {
        fn find(spec: &MachineSpec) -> Option<&str> {
            match spec {
                MachineSpec::Table { dsl } => Some(dsl),
                MachineSpec::Construction { inner, .. } => inner.iter().find_map(find),
            }
        }
        find(&self.machine)
    }
}

fn param<T: std::str::FromStr>(
    params: &std::collections::BTreeMap<String, String>,
    key: &str,
) -> Result<T> {
    params
        .get(key)
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| Error::InstanceMalformed(format!("missing or bad parameter {key:?}")))
}

fn only_inner(inner: &[MachineSpec]) -> Result<MachineRef> {
    match inner {
        [one] => machine_from_spec(one),
        _ => Err(Error::InstanceMalformed(format!(
            "expected one inner machine, found {}",
            inner.len()
        ))),
    }
}

/// Rebuilds a machine from its description.
pub fn machine_from_spec(spec: &MachineSpec) -> Result<MachineRef> {
    match spec {
        MachineSpec::Table { dsl } => Ok(MachineRef::table(parse_tm(dsl)?)),
        MachineSpec::Construction {
            name,
            params,
            inner,
        } => match name.as_str() {
            "pexp-sink" => Ok(MachineRef::virtual_machine(SinkAfter {
                inner: only_inner(inner)?,
                k: param(params, "k")?,
            })),
            "halt-detector" => Ok(MachineRef::virtual_machine(HaltDetector {
                inner: only_inner(inner)?,
                s: param::<TritWord>(params, "s")?,
                k: param(params, "k")?,
            })),
            "tautology-evaluator" => Ok(MachineRef::virtual_machine(TautologyEvaluator)),
            "t-cmux" => Ok(MachineRef::virtual_machine(TCmuxMachine)),
            other => Err(Error::InstanceMalformed(format!("unknown construction {other:?}"))),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::machine::simulate;
    use crate::problems::{reduce_bhp_to_pexp, reduce_pexp_to_detect1};

    #[test]
    fn rebuilt_machine_behaves_identically() {
        let m = MachineRef::table(corpus::parity());
        let x: TritWord = "110".parse().unwrap();
        let p = reduce_bhp_to_pexp(&m, &x, 6);
        let d = reduce_pexp_to_detect1(&p.m, &p.x, p.k).unwrap();
        let bundle = InstanceBundle {
            problem: "detect1".into(),
            machine: d.m.spec(),
            x: d.x.clone(),
            bound: d.k,
        };
        assert_eq!(bundle.table_dsl(), Some(corpus::parity().to_dsl().as_str()));
        let rebuilt = machine_from_spec(&bundle.machine).unwrap();
        for y in ["01", "11", "1", "001"] {
            let y: TritWord = y.parse().unwrap();
            assert_eq!(simulate(&rebuilt, &y, 100), simulate(&d.m, &y, 100));
        }
    }

    #[test]
    fn unknown_construction() {
        let spec = MachineSpec::Construction {
            name: "nope".into(),
            params: Default::default(),
            inner: vec![],
        };
        assert!(machine_from_spec(&spec).is_err());
    }
}
