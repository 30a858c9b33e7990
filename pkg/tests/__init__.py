# makes tests importable when needed
