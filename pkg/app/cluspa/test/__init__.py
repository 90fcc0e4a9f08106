from cluspa.src import lpoly
from cluspa.src import expand
