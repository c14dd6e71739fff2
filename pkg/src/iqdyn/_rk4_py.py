"""Pure-numpy RK4 kernel; same signature as the compiled ``_rk4.rk4_steps``."""
import numpy as np


def rk4_steps(generator, y0, h, nsteps):
    a = np.ascontiguousarray(generator, dtype=np.complex128)
    y = np.array(y0, dtype=np.complex128, copy=True)
    half = 0.5 * h
    sixth = h / 6.0
    for _ in range(int(nsteps)):
        k1 = a @ y
        k2 = a @ (y + half * k1)
        k3 = a @ (y + half * k2)
        k4 = a @ (y + h * k3)
        y = y + sixth * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return y
