//! Line-oriented circuit format: one gate per line, `KIND q... [params]`.
//!
//! ```text
//! ROTY 3 1.5707963267948966e0
//! CH 3 2
//! CCR11 1 2 3 3.8643269014032082e0
//! EVOLVE 1 2 3 5.6537471932098726e-1 1.0000000000000000e0
//! ```
//!
//! Parameters are written with 17 significant digits, so parsing restores
//! them bit for bit. Blank lines and lines starting with `#` are skipped.

use std::fmt::Write as _;

use super::gate::{Gate, Polarity};
use super::Circuit;
use crate::error::{Error, Result};

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_gate(g: &Gate) -> String {
    match *g {
        Gate::RotY { target, gamma } => format!("ROTY {target} {}", num(gamma)),
        Gate::Cnot { control, target } => format!("CNOT {control} {target}"),
        Gate::Not { target } => format!("NOT {target}"),
        Gate::Ch { control, target } => format!("CH {control} {target}"),
        Gate::Cr {
            control,
            target,
            phi,
        } => format!("CR {control} {target} {}", num(phi)),
        Gate::Ccr {
            controls: [a, b],
            target,
            polarity,
            phi,
        } => {
            let kind = match polarity {
                Polarity::Ones => "CCR11",
                Polarity::Zeros => "CCR00",
            };
            format!("{kind} {a} {b} {target} {}", num(phi))
        }
        Gate::EqNeighborEvolve { t, kappa } => {
            format!("EVOLVE 1 2 3 {} {}", num(t), num(kappa))
        }
    }
}

pub fn write_circuit(c: &Circuit) -> String {
    let mut out = String::new();
    for g in c.gates() {
        let _ = writeln!(out, "{}", write_gate(g));
    }
    out
}

fn parse_gate(line: &str, lineno: usize) -> Result<Gate> {
    let err = |message: String| Error::Parse {
        line: lineno,
        message,
    };
    let mut fields = line.split_whitespace();
    let kind = fields.next().ok_or_else(|| err("empty line".into()))?;
    let rest: Vec<&str> = fields.collect();
    let (n_qubits, n_params) = match kind {
        "NOT" => (1, 0),
        "ROTY" => (1, 1),
        "CNOT" | "CH" => (2, 0),
        "CR" => (2, 1),
        "CCR11" | "CCR00" => (3, 1),
        "EVOLVE" => (3, 2),
        other => return Err(err(format!("unknown gate kind `{other}`"))),
    };
    if rest.len() != n_qubits + n_params {
        return Err(err(format!(
            "{kind} takes {} fields, found {}",
            n_qubits + n_params,
            rest.len()
        )));
    }
    let q = rest[..n_qubits]
        .iter()
        .map(|s| s.parse::<usize>().map_err(|e| err(format!("bad qubit `{s}`: {e}"))))
        .collect::<Result<Vec<_>>>()?;
    let p = rest[n_qubits..]
        .iter()
        .map(|s| s.parse::<f64>().map_err(|e| err(format!("bad number `{s}`: {e}"))))
        .collect::<Result<Vec<_>>>()?;
    let gate = match kind {
        "NOT" => Gate::Not { target: q[0] },
        "ROTY" => Gate::RotY {
            target: q[0],
            gamma: p[0],
        },
        "CNOT" => Gate::Cnot {
            control: q[0],
            target: q[1],
        },
        "CH" => Gate::Ch {
            control: q[0],
            target: q[1],
        },
        "CR" => Gate::Cr {
            control: q[0],
            target: q[1],
            phi: p[0],
        },
        "CCR11" | "CCR00" => Gate::Ccr {
            controls: [q[0], q[1]],
            target: q[2],
            polarity: if kind == "CCR11" {
                Polarity::Ones
            } else {
                Polarity::Zeros
            },
            phi: p[0],
        },
        _ => {
            if q != [1, 2, 3] {
                return Err(err("EVOLVE acts on qubits 1 2 3".into()));
            }
            Gate::EqNeighborEvolve {
                t: p[0],
                kappa: p[1],
            }
        }
    };
    gate.validate().map_err(|e| err(e.to_string()))?;
    Ok(gate)
}

pub fn parse_circuit(text: &str) -> Result<Circuit> {
    let mut gates = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        gates.push(parse_gate(line, k + 1)?);
    }
    Circuit::new(gates)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{circuit_mpcc_v1, circuit_mpcc_v2, decompose_ccr};
    use proptest::prelude::*;

    #[test]
    fn known_circuits_round_trip() {
        for c in [
            circuit_mpcc_v1(0.8).unwrap(),
            circuit_mpcc_v2(2.2, 1.5).unwrap(),
            Circuit::new(decompose_ccr(0.3, Polarity::Zeros)).unwrap(),
        ] {
            assert_eq!(parse_circuit(&write_circuit(&c)).unwrap(), c);
        }
    }

    #[test]
    fn format_details() {
        let g = Gate::RotY {
            target: 3,
            gamma: 0.1,
        };
        assert_eq!(write_gate(&g), "ROTY 3 1.0000000000000001e-1");
        let c = parse_circuit("# header\n\nNOT 2\n  CNOT 1 3  \n").unwrap();
        assert_eq!(c.len(), 2);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let cases = [
            ("NOT 1\nFOO 1", 2),
            ("CNOT 1", 1),
            ("ROTY 1 abc", 1),
            ("CNOT 2 2", 1),
            ("EVOLVE 1 3 2 0.1 1.0", 1),
            ("\nNOT x", 2),
        ];
        for (text, line) in cases {
            match parse_circuit(text) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
    }

    fn pair() -> impl Strategy<Value = (usize, usize)> {
        (1usize..=3, 1usize..=2).prop_map(|(c, d)| (c, (c + d - 1) % 3 + 1))
    }

    fn any_gate() -> impl Strategy<Value = Gate> {
        let x = proptest::num::f64::NORMAL | proptest::num::f64::ZERO;
        prop_oneof![
            (1usize..=3, x).prop_map(|(target, gamma)| Gate::RotY { target, gamma }),
            (1usize..=3).prop_map(|target| Gate::Not { target }),
            pair().prop_map(|(control, target)| Gate::Cnot { control, target }),
            pair().prop_map(|(control, target)| Gate::Ch { control, target }),
            (pair(), x).prop_map(|((control, target), phi)| Gate::Cr { control, target, phi }),
            (x, any::<bool>()).prop_map(|(phi, ones)| Gate::Ccr {
                controls: [1, 2],
                target: 3,
                polarity: if ones { Polarity::Ones } else { Polarity::Zeros },
                phi
            }),
            (x, x).prop_map(|(t, kappa)| Gate::EqNeighborEvolve { t, kappa }),
        ]
    }

    proptest! {
        #[test]
        fn text_round_trip(gates in proptest::collection::vec(any_gate(), 0..12)) {
            let c = Circuit::new(gates).unwrap();
            let text = write_circuit(&c);
            prop_assert_eq!(parse_circuit(&text).unwrap(), c);
        }
    }
}
