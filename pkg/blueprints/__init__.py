# Blueprints: comandos de linha de comando do setflow
