#pragma once

namespace synet {

/* JSON text of the bundled four-corridor benchmark network, compiled in so
   the reproduction pipeline runs without any external file.  The same text
   ships as configs/traffic.json for use with --config. */
const char* traffic_config_text();

}  // namespace synet
