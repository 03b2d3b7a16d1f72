from sheafbetti.commands.compute import compute_bp
from sheafbetti.commands.invert import invert_bp
from sheafbetti.commands.verify import verify_bp
from sheafbetti.commands.trees import trees_bp
