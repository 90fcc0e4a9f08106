from cluspa.src.expand import cluster_variable, f_vector, loop_element
from cluspa.src.lpoly import format_fraction
from cluspa.src.oracle import resolve_two_notched_branch
from cluspa.src.surface import LoopSpec, TaggedArcSpec, Triangulation

#load a tagged triangulation and an arc given by the triangles and arcs it crosses.
surface = Triangulation.from_json("app/cluspa/test/data/surface_three_punctured_square.json")
arc = TaggedArcSpec.from_json("app/cluspa/test/data/delta2.json")

#expansion with principal coefficients, using angle matchings. Other backends: snake, bipartite, qp.
print(format_fraction(cluster_variable(surface, arc, backend="angles")))

#the same variable without coefficients, and its f-vector.
#print(format_fraction(cluster_variable(surface, arc, coefficient_free=True)))
#print(f_vector(surface, arc, method="intersection"))

## Loop elements are only defined on surfaces without punctures.
#kronecker = Triangulation.from_json("app/cluspa/test/data/kronecker.json")
#print(format_fraction(loop_element(kronecker, LoopSpec.from_json("app/cluspa/test/data/kronecker_loop.json"), backend="band")))

#check which formula for a doubly notched arc lies in the cluster algebra (runs a mutation search).
#monogon = Triangulation.from_json("app/cluspa/test/data/twice_punctured_monogon.json")
#print(resolve_two_notched_branch(monogon, TaggedArcSpec.from_json("app/cluspa/test/data/a_pq.json"), depth=4))
