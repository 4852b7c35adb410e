//! JSON documents for hidden-shift and dihedral instances.

use serde::{Deserialize, Serialize};

use crate::diffset::{DifferenceSet, DifferenceSetDoc};
use crate::dihedral::{DihedralHspInstance, SemidirectGroup};
use crate::error::{Error, Result};
use crate::group::{AbelianGroup, GroupElement, GroupSpec};
use crate::hidden_shift::{HiddenShiftInstance, ShiftOracle, WhiteBoxSinger};
use crate::oracle::{tabulate, SetOracle};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleKind {
    Blackbox,
    WhiteboxSinger,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WhiteboxDoc {
    /// Coefficients of `β` in the field recorded by the set's provenance.
    pub beta: Vec<u64>,
    /// `s` with `β = α^s`, when known.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exponent: Option<u64>,
}

/// `{"diffset", "secret", "oracle", "whitebox", "shifted"}`.
///
/// A black-box oracle is taken from `shifted` (the members of `s + D`) when
/// present, otherwise from `secret`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceDoc {
    pub diffset: DifferenceSetDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub secret: Option<Vec<usize>>,
    pub oracle: OracleKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub whitebox: Option<WhiteboxDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shifted: Option<Vec<Vec<usize>>>,
}

impl InstanceDoc {
    pub fn from_instance(inst: &HiddenShiftInstance) -> Self {
        let g = inst.diffset().group();
        let secret = inst.secret().map(|s| s.coords().to_vec());
        match inst.oracle() {
            ShiftOracle::BlackBox(o) => {
                let table = tabulate(o);
                InstanceDoc {
                    diffset: inst.diffset().to_doc(),
                    secret,
                    oracle: OracleKind::Blackbox,
                    whitebox: None,
                    shifted: Some(
                        (0..g.order())
                            .filter(|&x| table[x])
                            .map(|x| g.element_at(x).into_coords())
                            .collect(),
                    ),
                }
            }
            ShiftOracle::WhiteBoxSinger(w) => {
                let exponent = inst
                    .secret()
                    .map(|s| g.index_of(&g.negate(s).expect("member of the group")) as u64);
                InstanceDoc {
                    diffset: inst.diffset().to_doc(),
                    secret,
                    oracle: OracleKind::WhiteboxSinger,
                    whitebox: Some(WhiteboxDoc {
                        beta: w.beta().coeffs().to_vec(),
                        exponent,
                    }),
                    shifted: None,
                }
            }
        }
    }

    pub fn into_instance(self) -> Result<HiddenShiftInstance> {
        let ds = DifferenceSet::from_doc(self.diffset)?;
        let g = ds.group().clone();
        let secret = self.secret.map(|c| g.element(c)).transpose()?;
        let inst = match self.oracle {
            OracleKind::Blackbox => match (self.shifted, &secret) {
                (Some(members), _) => {
                    let mut table = vec![false; g.order()];
                    for c in members {
                        table[g.index_of(&g.element(c)?)] = true;
                    }
                    HiddenShiftInstance::from_oracle(&ds, ShiftOracle::BlackBox(SetOracle::new(g.clone(), table)))?
                }
                (None, Some(s)) => HiddenShiftInstance::blackbox(&ds, s)?,
                (None, None) => {
                    return Err(Error::Parameter(
                        "a black-box instance needs \"shifted\" or \"secret\"".into(),
                    ))
                }
            },
            OracleKind::WhiteboxSinger => {
                let wb = self
                    .whitebox
                    .ok_or_else(|| Error::Parameter("white-box instance without \"whitebox\"".into()))?;
                match wb.exponent {
                    Some(e) => HiddenShiftInstance::whitebox_singer(&ds, e)?,
                    None => {
                        let oracle = whitebox_from_beta(&ds, wb.beta)?;
                        HiddenShiftInstance::from_oracle(&ds, ShiftOracle::WhiteBoxSinger(oracle))?
                    }
                }
            }
        };
        let inst = match secret {
            Some(s) => inst.with_secret(Some(s)),
            None => inst,
        };
        if !inst.is_consistent()? {
            return Err(Error::Consistency("oracle does not match s + D for the recorded secret".into()));
        }
        Ok(inst)
    }
}

fn whitebox_from_beta(ds: &DifferenceSet, beta: Vec<u64>) -> Result<WhiteBoxSinger> {
    let crate::diffset::Provenance::Singer { field, .. } = ds.provenance() else {
        return Err(Error::Parameter("white-box oracles need a Singer set with provenance".into()));
    };
    let field = crate::field::FiniteField::try_from(field.clone())?;
    WhiteBoxSinger::for_singer_set(ds, field.element(beta)?)
}

/// `{"semidirect": true, "group", "values", "hidden_generator", "offsets", "whitebox"}`.
///
/// `values[i]` is the hiding value at canonical index `i` as a `0`/`1` string.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DihedralDoc {
    pub semidirect: bool,
    pub group: GroupSpec,
    pub values: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hidden_generator: Option<(Vec<usize>, u8)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub offsets: Option<Vec<usize>>,
    /// Replay data for white-box instances: the known set and `β`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diffset: Option<DifferenceSetDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub whitebox: Option<WhiteboxDoc>,
}

fn bits(v: &[bool]) -> String {
    v.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

fn parse_bits(s: &str) -> Result<Vec<bool>> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(Error::Parameter(format!("invalid hiding-value symbol {other:?}"))),
        })
        .collect()
}

impl DihedralDoc {
    pub fn from_instance(inst: &DihedralHspInstance) -> Self {
        DihedralDoc {
            semidirect: true,
            group: inst.group().base().spec(),
            values: inst.values().iter().map(|v| bits(v)).collect(),
            hidden_generator: inst.hidden_generator().map(|h| (h.coords().to_vec(), 1)),
            offsets: inst.offsets().map(<[usize]>::to_vec),
            diffset: None,
            whitebox: None,
        }
    }

    pub fn into_instance(self) -> Result<DihedralHspInstance> {
        if !self.semidirect {
            return Err(Error::Parameter("expected \"semidirect\": true".into()));
        }
        let base = AbelianGroup::new(self.group.moduli)?;
        let values = self.values.iter().map(|s| parse_bits(s)).collect::<Result<Vec<_>>>()?;
        let h: Option<GroupElement> = match self.hidden_generator {
            Some((coords, 1)) => Some(base.element(coords)?),
            Some((_, t)) => {
                return Err(Error::Parameter(format!(
                    "hidden generator must be a reflection (t = 1), got t = {t}"
                )))
            }
            None => None,
        };
        DihedralHspInstance::new(SemidirectGroup::new(base), values, h, self.offsets)
    }
}
