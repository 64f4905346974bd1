//! Primary selection rules: the unit comparator, primary-2 designation, and
//! the role type shared by the membership machinery.
//!
//! The comparator is a strict total order over distinct unit identities:
//! lower priority number wins, then lexicographically smaller name, then
//! lexicographically smaller serial. Comparison is bytewise and locale-free.

use std::cmp::Ordering;
use std::net::Ipv4Addr;

use thiserror::Error;

use crate::wire::{InterfaceMode, RadioType, SerialNumber};

/// Live role of a unit. `Primary2` is the designated standby and counts as a
/// secondary for every data-plane purpose.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Unjoined,
    Secondary,
    Primary2,
    Primary,
    Disabled,
}

impl Role {
    pub fn as_str(self) -> &'static str {
        match self {
            Role::Unjoined => "unjoined",
            Role::Secondary => "secondary",
            Role::Primary2 => "primary-2",
            Role::Primary => "primary",
            Role::Disabled => "disabled",
        }
    }

    pub fn is_member(self) -> bool {
        matches!(self, Role::Secondary | Role::Primary2 | Role::Primary)
    }
}

/// Bootstrap identity of a unit, set before it ever joins.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitConfig {
    pub name: String,
    pub serial: SerialNumber,
    /// 1 is the highest priority; valid range 1-100.
    pub priority: u8,
    pub mode: InterfaceMode,
    pub radio_type: RadioType,
    /// Local pool of management addresses reserved for clustering.
    pub mgmt_ip_pool: Vec<Ipv4Addr>,
}

impl UnitConfig {
    pub fn validate(&self) -> Result<(), String> {
        if !(1..=100).contains(&self.priority) {
            return Err(format!("priority {} outside 1-100", self.priority));
        }
        if self.name.is_empty() || self.name.len() > 32 {
            return Err(format!("name {:?} must be 1-32 characters", self.name));
        }
        Ok(())
    }

    pub fn identity(&self) -> UnitIdentity {
        UnitIdentity {
            priority: self.priority,
            name: self.name.clone(),
            serial: self.serial,
        }
    }
}

/// The fields the election comparator consumes. The wire carries priority
/// and serial in the selection-info component; names come from the mirrored
/// bootstrap configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitIdentity {
    pub priority: u8,
    pub name: String,
    pub serial: SerialNumber,
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("duplicate unit identity: priority {priority}, name {name:?}, serial {serial}")]
pub struct DuplicateIdentity {
    pub priority: u8,
    pub name: String,
    pub serial: SerialNumber,
}

/// Rank ordering: `Less` means `a` outranks `b` (wins an election).
pub fn rank_cmp(a: &UnitIdentity, b: &UnitIdentity) -> Ordering {
    (a.priority, a.name.as_bytes(), a.serial.as_bytes())
        .cmp(&(b.priority, b.name.as_bytes(), b.serial.as_bytes()))
}

/// Returns the winner between two units, or an error for identical
/// identities (a configuration bug: serials must be unique cluster-wide).
pub fn compare_units<'a>(
    a: &'a UnitIdentity,
    b: &'a UnitIdentity,
) -> Result<&'a UnitIdentity, DuplicateIdentity> {
    match rank_cmp(a, b) {
        Ordering::Less => Ok(a),
        Ordering::Greater => Ok(b),
        Ordering::Equal => Err(DuplicateIdentity {
            priority: a.priority,
            name: a.name.clone(),
            serial: a.serial,
        }),
    }
}

/// Sorts members best-first under the comparator.
pub fn rank_members(members: &[UnitIdentity]) -> Vec<&UnitIdentity> {
    let mut sorted: Vec<&UnitIdentity> = members.iter().collect();
    sorted.sort_by(|a, b| rank_cmp(a, b));
    sorted
}

/// The member that should hold the primary role: rank 1 under the comparator.
pub fn select_primary(members: &[UnitIdentity]) -> Option<&UnitIdentity> {
    rank_members(members).first().copied()
}

/// The member that should hold primary-2: rank 2 under the comparator.
/// A cluster of fewer than two members has no primary-2.
pub fn recompute_primary2(members: &[UnitIdentity]) -> Option<&UnitIdentity> {
    rank_members(members).get(1).copied()
}
