//! Shared data stores.

use std::sync::atomic::{AtomicU64, Ordering};

use crate::value::{Value, ValueType};

static NEXT_HEAP: AtomicU64 = AtomicU64::new(0);

/// Handle to a shared data store, issued by [`Heap::share`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct StoreRef {
    id: usize,
    ty: ValueType,
    heap: u64,
}

impl StoreRef {
    pub fn id(&self) -> usize {
        self.id
    }

    pub fn value_type(&self) -> ValueType {
        self.ty
    }
}

/// Backing storage for every store issued by one engine instance.
///
/// Cloning a heap takes a snapshot that still owns the refs issued so far.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Heap {
    owner: u64,
    cells: Vec<(ValueType, Value)>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum StoreError {
    #[error("store {0} was not issued by this heap")]
    Foreign(usize),
    #[error("store {id} holds {expected} values, got {found}")]
    TypeMismatch {
        id: usize,
        expected: ValueType,
        found: ValueType,
    },
}

impl Heap {
    pub fn new() -> Self {
        Heap {
            owner: NEXT_HEAP.fetch_add(1, Ordering::Relaxed),
            cells: Vec::new(),
        }
    }

    /// Allocates a fresh store holding `initial`. Ids count up from 0.
    pub fn share(&mut self, initial: impl Into<Value>) -> StoreRef {
        let value = initial.into();
        let ty = value.type_of();
        let id = self.cells.len();
        self.cells.push((ty, value));
        StoreRef {
            id,
            ty,
            heap: self.owner,
        }
    }

    fn check(&self, r: StoreRef) -> Result<(), StoreError> {
        match self.cells.get(r.id) {
            Some((ty, _)) if r.heap == self.owner && *ty == r.ty => Ok(()),
            _ => Err(StoreError::Foreign(r.id)),
        }
    }

    pub fn read(&self, r: StoreRef) -> Result<&Value, StoreError> {
        self.check(r)?;
        Ok(&self.cells[r.id].1)
    }

    pub fn write(&mut self, r: StoreRef, value: Value) -> Result<(), StoreError> {
        self.check(r)?;
        if value.type_of() != r.ty {
            return Err(StoreError::TypeMismatch {
                id: r.id,
                expected: r.ty,
                found: value.type_of(),
            });
        }
        self.cells[r.id].1 = value;
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Store ids with their declared type and current value, in id order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, ValueType, &Value)> {
        self.cells
            .iter()
            .enumerate()
            .map(|(id, (ty, v))| (id, *ty, v))
    }
}

impl Default for Heap {
    fn default() -> Self {
        Heap::new()
    }
}
