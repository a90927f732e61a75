// placeholder until the pipeline module lands
