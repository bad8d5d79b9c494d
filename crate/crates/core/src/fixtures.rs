//! The standard quantale instances used throughout the test suites and the
//! verification harness.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::constructors::ideals_quantale;
use crate::quantale::{close_order, Quantale};

fn names(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| String::from(*s)).collect()
}

/// The four-element Boolean algebra {⊥, a, ¬a, ⊤} with ⊗ = ∧.
pub fn b4() -> Arc<Quantale> {
    let le = close_order(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]);
    let meet = |x: usize, y: usize| -> usize {
        match (x.min(y), x.max(y)) {
            (a, b) if a == b => a,
            (0, _) => 0,
            (1, 2) => 0,
            (a, 3) => a,
            _ => unreachable!(),
        }
    };
    let mut tensor = alloc::vec![0usize; 16];
    for x in 0..4 {
        for y in 0..4 {
            tensor[x * 4 + y] = meet(x, y);
        }
    }
    Arc::new(Quantale::new(names(&["bot", "a", "na", "top"]), le, tensor).unwrap())
}

/// The three-element chain locale {⊥, m, ⊤} with ⊗ = ∧.
pub fn chain3() -> Arc<Quantale> {
    let le = close_order(3, &[(0, 1), (1, 2)]);
    let mut tensor = alloc::vec![0usize; 9];
    for x in 0..3 {
        for y in 0..3 {
            tensor[x * 3 + y] = x.min(y);
        }
    }
    Arc::new(Quantale::new(names(&["bot", "mid", "top"]), le, tensor).unwrap())
}

/// The three-valued Łukasiewicz chain {0, ½, 1} with x ⊗ y = max(0, x+y−1).
pub fn l3() -> Arc<Quantale> {
    let le = close_order(3, &[(0, 1), (1, 2)]);
    let mut tensor = alloc::vec![0usize; 9];
    for x in 0..3 {
        for y in 0..3 {
            tensor[x * 3 + y] = (x + y).saturating_sub(2);
        }
    }
    Arc::new(Quantale::new(names(&["0", "half", "1"]), le, tensor).unwrap())
}

/// The ideals of Z/4 under ideal product: the chain (0) ⊂ (2) ⊂ (1).
pub fn ideals_z4() -> Arc<Quantale> {
    ideals_quantale(4).unwrap()
}

/// The one-element quantale.
pub fn one() -> Arc<Quantale> {
    Arc::new(Quantale::new(names(&["*"]), alloc::vec![true], alloc::vec![0]).unwrap())
}

/// All bundled quantales, in a fixed order.
pub fn all() -> Vec<Arc<Quantale>> {
    alloc::vec![b4(), chain3(), l3(), ideals_z4(), one()]
}
