"""Freeze the Dormand-Prince 8(5,3) tableau into a standalone module.

Run: python tools/gen_dop853_coeffs.py > src/coorbital/_dop853_coefficients.py
The coefficients are Hairer, Norsett & Wanner's DOP853 set; dumping them from
scipy once avoids hand-transcription errors while keeping the runtime free of
private-module imports.
"""

import numpy as np
from scipy.integrate._ivp import dop853_coefficients as dc


def dump(name, arr):
    arr = np.asarray(arr, dtype=float)
    flat = ", ".join(repr(v) for v in arr.ravel())
    if arr.ndim == 1:
        print(f"{name} = np.array([{flat}])")
    else:
        print(f"{name} = np.array([{flat}]).reshape({arr.shape[0]}, {arr.shape[1]})")
    print()


print('"""Dormand-Prince 8(5,3) coefficients (Hairer-Norsett-Wanner DOP853).')
print()
print("Auto-generated by tools/gen_dop853_coeffs.py -- do not edit by hand.")
print('"""')
print()
print("import numpy as np")
print()
print(f"N_STAGES = {dc.N_STAGES}")
print()
dump("A", dc.A[: dc.N_STAGES, : dc.N_STAGES])
dump("B", dc.B)
dump("C", dc.C[: dc.N_STAGES])
dump("E3", dc.E3)
dump("E5", dc.E5)
