use pyo3::prelude::*;

use relsusy_py::relsusy_module;

#[test]
fn module_runs_in_embedded_interpreter() {
    pyo3::append_to_inittab!(relsusy_module);
    Python::initialize();
    Python::attach(|py| {
        py.run(
            cr#"
import json, math
import relsusy as rs

spec = rs.ModelSpec("kg", n_fock=10, buffer=3)
e, flag = rs.relativistic_energy(spec, 0)
assert not flag and abs(e - math.sqrt(2.0)) < 1e-12
rows = rs.fw_spectrum(spec)
assert len(rows) == 7 and abs(rows[0][2] - math.sqrt(2.0)) < 1e-10

try:
    rs.ModelSpec("spin2")
except ValueError:
    pass
else:
    raise AssertionError("unknown case accepted")

code, report = rs.run_command("identities", json.dumps({"schema_version": 1, "case": "dirac", "n_fock": 8, "buffer": 2}))
assert code == 0 and json.loads(report)["payload"]["command"] == "identities"
"#,
            None,
            None,
        )
        .inspect_err(|e| {
            e.print(py);
        })
        .unwrap();
    });
}
