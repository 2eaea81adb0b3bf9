# coding: utf-8

# # A three-site chain by hand
#
# The smallest interesting case: a spin-1 Krawtchouk chain (two_s = 2) at
# theta = pi/2 with a uniform field b = 0.5. Every number below can be
# checked by hand.

# In[1]:

import math

import numpy as np

from heunchain import (
    Su2Params,
    build_model,
    c_spectrum_direct,
    c_spectrum_via_commutant,
    chop,
    commutant_matrix,
    fermi_index,
    full_correlation,
    hamiltonian_spectrum,
)
from heunchain.manybody import entanglement_entropy

np.set_printoptions(precision=6, suppress=True)


# The chain has a constant field and two equal hoppings, so the one-particle
# energies are evenly spaced: -1.5, -0.5, 0.5.

# In[2]:

params = Su2Params(two_s=2, theta=math.pi / 2, b=0.5)
chain, bd = build_model(params)
spec = hamiltonian_spectrum(chain)
print("fields B   ", chain.fields_B)
print("hoppings J ", chain.hoppings_J)
print("energies   ", spec.values)
print("analytic   ", bd.analytic_omega)


# Two modes have negative energy, so the Fermi sea fills k = 0, 1 and K = 1.

# In[3]:

fd = fermi_index(spec)
print("K =", fd.K, " ground energy =", fd.ground_energy)


# The correlation matrix is the projector onto the filled modes. Keeping
# sites 0 and 1 gives a 2x2 block with eigenvalues 1/4 and 1.

# In[4]:

cf = full_correlation(spec, fd)
cc = chop(cf, ell=1)
print(cf.entries)
print(cc.entries)


# The tridiagonal commutant of that block is the 2x2 matrix
# [[-1.5, -sqrt 2], [-sqrt 2, -0.5]]. Its eigenvectors diagonalize C too.

# In[5]:

T = commutant_matrix((chain, bd), fd, ell=1)
print(T.to_dense())
print("[T, C] =", np.abs(T.to_dense() @ cc.entries - cc.entries @ T.to_dense()).max())

via = c_spectrum_via_commutant(T, cc)
direct = c_spectrum_direct(cc)
print("nu via T   ", via.nu)
print("nu direct  ", direct.nu)


# Only the mode at 1/4 contributes to the entropy. The same number comes out
# of the explicit 8-dimensional Fock space after tracing out site 2.

# In[6]:

print("S1 from nu      ", via.entropy)
print("S1 closed form  ", -0.25 * math.log(0.25) - 0.75 * math.log(0.75))
print("S1 many-body    ", entanglement_entropy(chain, 1))
