# coding: utf-8

# # A semi-infinite chain, truncated
#
# The su(1,1) (Meixner) chain never ends. We keep M sites, compute the
# entropy of the first ell+1 sites, and double M until the answer stops
# moving. For moderate theta, 64 sites are already plenty.

# In[1]:

from heunchain import Su11Params, converge_su11

row, trace = converge_su11(Su11Params(kappa=1.0, theta=0.4, b=-3.2), ell=4)
for step in trace:
    print(f"M={step.size:4d}  S1={step.S1:.15f}  [T,C]={step.commutator_residual:.1e}  dS1={step.S1_change:.1e}")
print("converged S1 =", row.S1, " K =", row.K)


# At large theta the modes spread out over many sites. Each small window is
# too short then, and the commutator residual shows it. The residual falls
# by orders of magnitude as M grows, until round-off is reached. At the two
# smallest sizes the commutant is refused (a warning is logged) and S1 there
# comes from the direct route.

# In[2]:

row, trace = converge_su11(Su11Params(kappa=1.0, theta=3.0, b=-4.2), ell=4)
for step in trace:
    print(f"M={step.size:4d}  S1={step.S1:.15f}  [T,C]={step.commutator_residual:.1e}  dS1={step.S1_change:.1e}")
