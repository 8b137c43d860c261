use pyo3::ffi::c_str;
use pyo3::prelude::*;

use arcmilnor_py::bindings;

#[test]
fn module_runs_inside_an_embedded_interpreter() {
    pyo3::append_to_inittab!(bindings);
    Python::initialize();
    Python::attach(|py| {
        py.run(
            c_str!(
                r#"
import arcmilnor
cusp = arcmilnor.Germ("x^2+y^3")
res = cusp.resolve()
assert [res.lefschetz(n) for n in range(1, 7)] == [0, 2, 3, 2, 0, -1]
assert res.class_xn1(3, "split") == "3*L^4"
assert res.count_formula(2, 13) == 2 * 13**3
assert cusp.count(2, 13) == 2 * 13**3
assert arcmilnor.verify_mt(cusp, 2).passed
try:
    arcmilnor.verify_mt(arcmilnor.Germ("x*y"), 3, [3, 5])
    raise AssertionError("too few primes must be rejected")
except ValueError as e:
    assert "needed" in str(e)
try:
    cusp.count(6, 13, work_bound=100)
    raise AssertionError("the work bound must stop the search")
except arcmilnor.Aborted:
    pass
"#
            ),
            None,
            None,
        )
        .unwrap_or_else(|e| panic!("{e}"));
    });
}
