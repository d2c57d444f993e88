"""Writes tripeptide.pdb: Gly-Ala-Ser heavy atoms from ideal internal
coordinates (alpha-helical backbone)."""
import math
import numpy as np


def place(a, b, c, bond, angle, torsion):
    angle, torsion = math.radians(angle), math.radians(torsion)
    bc = c - b
    bc /= np.linalg.norm(bc)
    n = np.cross(b - a, bc)
    n /= np.linalg.norm(n)
    m = np.cross(n, bc)
    d2 = np.array([-bond * math.cos(angle),
                   bond * math.sin(angle) * math.cos(torsion),
                   bond * math.sin(angle) * math.sin(torsion)])
    return c + d2[0] * bc + d2[1] * m + d2[2] * n


PHI, PSI, OMEGA = -57.0, -47.0, 180.0
residues = ["GLY", "ALA", "SER"]
atoms = []  # (name, resname, resseq, xyz, element)

n = np.array([0.0, 0.0, 0.0])
ca = np.array([1.458, 0.0, 0.0])
c = place(np.array([0.0, 1.0, 0.0]), n, ca, 1.525, 111.2, -60.0)
for k, res in enumerate(residues):
    seq = k + 1
    atoms.append(("N", res, seq, n, "N"))
    atoms.append(("CA", res, seq, ca, "C"))
    atoms.append(("C", res, seq, c, "C"))
    o = place(n, ca, c, 1.231, 120.5, PSI + 180.0)
    atoms.append(("O", res, seq, o, "O"))
    if res in ("ALA", "SER"):
        cb = place(c, n, ca, 1.530, 110.5, -122.5)
        atoms.append(("CB", res, seq, cb, "C"))
        if res == "SER":
            og = place(n, ca, cb, 1.417, 111.0, 60.0)
            atoms.append(("OG", res, seq, og, "O"))
    n_next = place(n, ca, c, 1.329, 116.2, PSI)
    ca_next = place(ca, c, n_next, 1.458, 121.7, OMEGA)
    c_next = place(c, n_next, ca_next, 1.525, 111.2, PHI)
    n, ca, c = n_next, ca_next, c_next

with open("tripeptide.pdb", "w") as f:
    for i, (name, res, seq, xyz, el) in enumerate(atoms, start=1):
        f.write("ATOM  %5d  %-3s %3s A%4d    %8.3f%8.3f%8.3f%6.2f%6.2f"
                "          %2s\n" % (i, name, res, seq, xyz[0], xyz[1],
                                     xyz[2], 1.0, 0.0, el))
    f.write("END\n")
