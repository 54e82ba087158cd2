//! Plain DPLL satisfiability check used as an exact shortcut: a satisfiable
//! set has no refutation at any budget.

use super::cnf::{is_positive, var_of, Lit};

#[derive(Clone, Copy, PartialEq, Eq)]
enum Value {
    Unset,
    True,
    False,
}

pub(crate) fn satisfiable(clauses: &[Vec<Lit>], num_vars: usize) -> bool {
    if clauses.iter().any(|c| c.is_empty()) {
        return false;
    }
    let mut values = vec![Value::Unset; num_vars];
    search(clauses, &mut values)
}

fn lit_value(values: &[Value], l: Lit) -> Value {
    match (values[var_of(l) as usize], is_positive(l)) {
        (Value::Unset, _) => Value::Unset,
        (Value::True, true) | (Value::False, false) => Value::True,
        _ => Value::False,
    }
}

fn assign(values: &mut [Value], l: Lit) {
    values[var_of(l) as usize] = if is_positive(l) { Value::True } else { Value::False };
}

fn search(clauses: &[Vec<Lit>], values: &mut Vec<Value>) -> bool {
    let snapshot = values.clone();
    // unit propagation to fixpoint
    loop {
        let mut changed = false;
        let mut branch: Option<Lit> = None;
        for c in clauses {
            let mut unassigned = None;
            let mut open = 0;
            let mut sat = false;
            for &l in c {
                match lit_value(values, l) {
                    Value::True => {
                        sat = true;
                        break;
                    }
                    Value::Unset => {
                        open += 1;
                        unassigned = Some(l);
                    }
                    Value::False => {}
                }
            }
            if sat {
                continue;
            }
            match open {
                0 => {
                    *values = snapshot;
                    return false;
                }
                1 => {
                    assign(values, unassigned.expect("one open literal"));
                    changed = true;
                }
                _ => {
                    if branch.is_none() {
                        branch = unassigned;
                    }
                }
            }
        }
        if changed {
            continue;
        }
        let Some(l) = branch else {
            return true;
        };
        for choice in [l, l ^ 1] {
            let before = values.clone();
            assign(values, choice);
            if search(clauses, values) {
                return true;
            }
            *values = before;
        }
        *values = snapshot;
        return false;
    }
}
