//! Membership oracles: total predicates on the elements of a group, queried
//! by canonical index.

use std::sync::atomic::{AtomicU64, Ordering};

use crate::group::{AbelianGroup, GroupElement};

pub trait MembershipOracle: Send + Sync {
    fn group(&self) -> &AbelianGroup;

    /// Membership of the element with canonical index `index`.
    fn contains_index(&self, index: usize) -> bool;

    fn contains(&self, x: &GroupElement) -> bool {
        self.contains_index(self.group().index_of(x))
    }
}

/// A tabulated subset of a group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetOracle {
    group: AbelianGroup,
    members: Vec<bool>,
}

impl SetOracle {
    pub fn new(group: AbelianGroup, members: Vec<bool>) -> Self {
        assert_eq!(members.len(), group.order(), "one flag per group element");
        SetOracle { group, members }
    }

    pub fn members(&self) -> &[bool] {
        &self.members
    }
}

impl MembershipOracle for SetOracle {
    fn group(&self) -> &AbelianGroup {
        &self.group
    }

    fn contains_index(&self, index: usize) -> bool {
        self.members[index]
    }
}

/// Adapts a closure over canonical indices.
pub struct FnOracle<F> {
    group: AbelianGroup,
    f: F,
}

impl<F> FnOracle<F>
where
    F: Fn(usize) -> bool + Send + Sync,
{
    pub fn new(group: AbelianGroup, f: F) -> Self {
        FnOracle { group, f }
    }
}

impl<F> MembershipOracle for FnOracle<F>
where
    F: Fn(usize) -> bool + Send + Sync,
{
    fn group(&self) -> &AbelianGroup {
        &self.group
    }

    fn contains_index(&self, index: usize) -> bool {
        (self.f)(index)
    }
}

/// Counts every evaluation of the wrapped oracle.
pub struct CountingOracle<'a> {
    inner: &'a dyn MembershipOracle,
    count: AtomicU64,
}

impl<'a> CountingOracle<'a> {
    pub fn new(inner: &'a dyn MembershipOracle) -> Self {
        CountingOracle {
            inner,
            count: AtomicU64::new(0),
        }
    }

    pub fn count(&self) -> u64 {
        self.count.load(Ordering::Relaxed)
    }
}

impl MembershipOracle for CountingOracle<'_> {
    fn group(&self) -> &AbelianGroup {
        self.inner.group()
    }

    fn contains_index(&self, index: usize) -> bool {
        self.count.fetch_add(1, Ordering::Relaxed);
        self.inner.contains_index(index)
    }
}

/// Tabulate an oracle over the whole group.
pub fn tabulate(oracle: &dyn MembershipOracle) -> Vec<bool> {
    (0..oracle.group().order()).map(|i| oracle.contains_index(i)).collect()
}
