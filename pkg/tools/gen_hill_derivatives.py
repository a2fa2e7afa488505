"""Generate frozen analytic derivatives of the Hill-variable Hamiltonian.

Run from the repository root:

    python tools/gen_hill_derivatives.py > src/coorbital/_generated_hill.py

The node-reduced Hamiltonian is differentiated symbolically once and the
results are emitted as plain scalar Python functions (njit-compatible) with
common subexpressions factored out.  The runtime package never imports sympy.

Numba's on-disk cache does not track callee source changes across modules,
so this tool also purges the package __pycache__ (stale compiled kernels
would silently keep the previous Hamiltonian).
"""

import pathlib
import shutil
import sys

import sympy as sp
from sympy.printing.pycode import PythonCodePrinter


SYMS = sp.symbols("r1 w1 R1 G1 r2 w2 R2 G2 C m0 m1 m2", positive=False)
r1, w1, R1, G1, r2, w2, R2, G2, C, m0, m1, m2 = SYMS
STATE = [r1, w1, R1, G1, r2, w2, R2, G2]


def hamiltonian():
    cJ = (C**2 - G1**2 - G2**2) / (2 * G1 * G2)
    # anomaly origin sits a quarter turn past the node azimuth: the in-plane
    # angle of body j is w_j + pi/2, which places the first-return section
    # w1 + w2 = 0 at the minimum of the mutual inclination along the family
    c1, s1 = -sp.sin(w1), sp.cos(w1)
    c2, s2 = -sp.sin(w2), sp.cos(w2)
    kep = (
        (m0 + m1) / (2 * m0 * m1) * (R1**2 + G1**2 / r1**2)
        - m0 * m1 / r1
        + (m0 + m2) / (2 * m0 * m2) * (R2**2 + G2**2 / r2**2)
        - m0 * m2 / r2
    )
    # Momentum dot product p1.p2 in the common-node-origin chart (body 1
    # tilted +I1, body 2 tilted -I2 about the node line).
    pdot = (
        c1 * c2 * R1 * R2
        + s1 * s2 * G1 * G2 / (r1 * r2)
        - c1 * s2 * R1 * G2 / r2
        - s1 * c2 * G1 * R2 / r1
        + cJ
        * (
            s1 * s2 * R1 * R2
            + c1 * c2 * G1 * G2 / (r1 * r2)
            + s1 * c2 * R1 * G2 / r2
            + c1 * s2 * G1 * R2 / r1
        )
    )
    delta2 = r1**2 + r2**2 - 2 * r1 * r2 * (c1 * c2 + cJ * s1 * s2)
    return kep + pdot / m0 - m1 * m2 / sp.sqrt(delta2)


class Printer(PythonCodePrinter):
    def _print_Pow(self, expr, **kwargs):
        # keep integer powers as multiplications-friendly ** form
        return super()._print_Pow(expr, **kwargs)


def emit_function(name, args, exprs, out_names, printer):
    """Emit one function; exprs is a list of sympy expressions assigned to
    out_names (either scalar return or out-array writes)."""
    repl, reduced = sp.cse(exprs, optimizations="basic")
    lines = [f"def {name}({', '.join(args)}):"]
    for lhs, rhs in repl:
        lines.append(f"    {lhs} = {printer.doprint(rhs)}")
    if isinstance(out_names, str):  # single scalar return
        lines.append(f"    return {printer.doprint(reduced[0])}")
    else:
        for tgt, expr in zip(out_names, reduced):
            lines.append(f"    {tgt} = {printer.doprint(expr)}")
        lines.append("    return None")
    return "\n".join(lines)


def main():
    printer = Printer({"fully_qualified_modules": False})
    H = hamiltonian()
    grad = [sp.diff(H, v) for v in STATE]
    hess = [sp.diff(g, v) for g in grad for v in STATE]
    dHdC = sp.diff(H, C)
    dgdC = [sp.diff(g, C) for g in grad]

    argstr = [str(s) for s in SYMS]
    blocks = [
        '"""Analytic derivatives of the node-reduced Hill Hamiltonian.',
        "",
        "Auto-generated by tools/gen_hill_derivatives.py -- do not edit by hand.",
        "State order: r1, w1, R1, G1, r2, w2, R2, G2; C is the angular-momentum",
        "parameter and m0, m1, m2 the physical masses (G = 1 units).",
        '"""',
        "",
        "from math import cos, sin, sqrt",
        "",
        "",
    ]
    blocks.append(emit_function("ham", argstr, [H], "H", printer))
    blocks.append("\n\n")
    blocks.append(
        emit_function(
            "grad",
            ["out"] + argstr,
            grad,
            [f"out[{i}]" for i in range(8)],
            printer,
        )
    )
    blocks.append("\n\n")
    blocks.append(emit_function("dham_dc", argstr, [dHdC], "dHdC", printer))
    blocks.append("\n\n")
    blocks.append(
        emit_function(
            "hess_and_dgrad_dc",
            ["out_h", "out_c"] + argstr,
            hess + dgdC,
            [f"out_h[{i}]" for i in range(64)] + [f"out_c[{i}]" for i in range(8)],
            printer,
        )
    )
    blocks.append("\n")
    sys.stdout.write("".join(b if b.endswith("\n") else b + "\n" for b in blocks))

    cache = pathlib.Path(__file__).resolve().parent.parent / "src" / "coorbital" / "__pycache__"
    if cache.is_dir():
        shutil.rmtree(cache)
        print(f"purged {cache}", file=sys.stderr)


if __name__ == "__main__":
    main()
